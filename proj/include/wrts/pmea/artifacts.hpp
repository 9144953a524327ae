#pragma once

#include <filesystem>
#include <string_view>

#include "json.hpp"
#include "wrts/common/artifact_error.hpp"
#include "wrts/modeling/extended_answer_matrix.hpp"
#include "wrts/strategy/answer_matrix.hpp"

namespace wrts::pmea {

/// Writes `doc` pretty-printed with a trailing newline, via a temporary file
/// and rename so a killed process never leaves a half-written artifact.
void write_json_artifact(const std::filesystem::path& path, const nlohmann::json& doc);

/// Reads a JSON artifact and checks its "format" field.
nlohmann::json read_json_artifact(const std::filesystem::path& path, std::string_view format);

void save_genome(const std::filesystem::path& path, const AnswerMatrix& genome);
AnswerMatrix load_genome(const std::filesystem::path& path);

void save_model(const std::filesystem::path& path, const ExtendedAnswerMatrix& model);
ExtendedAnswerMatrix load_model(const std::filesystem::path& path);

void write_text_atomic(const std::filesystem::path& path, std::string_view text);

}  // namespace wrts::pmea
