#include "wrts/pmea/artifacts.hpp"

#include <fstream>
#include <sstream>

namespace wrts::pmea {

void write_text_atomic(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ArtifactError(ArtifactError::Kind::Missing, "cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw ArtifactError(ArtifactError::Kind::Missing, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_json_artifact(const std::filesystem::path& path, const nlohmann::json& doc) {
  write_text_atomic(path, doc.dump(2) + "\n");
}

nlohmann::json read_json_artifact(const std::filesystem::path& path, std::string_view format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArtifactError(ArtifactError::Kind::Missing, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  nlohmann::json doc = nlohmann::json::parse(buffer.str(), nullptr, false);
  if (doc.is_discarded()) throw ArtifactError(ArtifactError::Kind::Malformed, path.string() + ": not valid JSON");
  if (!doc.is_object() || !doc.contains("format") || !doc["format"].is_string()) {
    throw ArtifactError(ArtifactError::Kind::Malformed, path.string() + ": missing format field");
  }
  const auto& found = doc["format"].get_ref<const std::string&>();
  if (found != format) {
    throw ArtifactError(ArtifactError::Kind::VersionMismatch,
                        path.string() + ": expected format " + std::string(format) + ", found " + found);
  }
  return doc;
}

void save_genome(const std::filesystem::path& path, const AnswerMatrix& genome) {
  write_json_artifact(path, matrix_to_json(genome));
}

AnswerMatrix load_genome(const std::filesystem::path& path) {
  const auto doc = read_json_artifact(path, "answer-matrix-v1");
  try {
    return matrix_from_json(doc);
  } catch (const std::exception& e) {
    throw ArtifactError(ArtifactError::Kind::Malformed, path.string() + ": " + e.what());
  }
}

void save_model(const std::filesystem::path& path, const ExtendedAnswerMatrix& model) {
  write_json_artifact(path, model_to_json(model));
}

ExtendedAnswerMatrix load_model(const std::filesystem::path& path) {
  const auto doc = read_json_artifact(path, "extended-answer-matrix-v1");
  try {
    return model_from_json(doc);
  } catch (const std::exception& e) {
    throw ArtifactError(ArtifactError::Kind::Malformed, path.string() + ": " + e.what());
  }
}

}  // namespace wrts::pmea
