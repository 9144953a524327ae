#!/usr/bin/env python3
"""Regenerates the battle map fixtures under data/maps.

The output is frozen in the repository; rerunning must reproduce it exactly.
"""
import random
import sys
from collections import deque
from pathlib import Path


def blank(w, h):
    return [["." for _ in range(w)] for _ in range(h)]


def reachable(grid, start):
    h, w = len(grid), len(grid[0])
    seen = {start}
    todo = deque([start])
    while todo:
        x, y = todo.popleft()
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                nx, ny = x + dx, y + dy
                if 0 <= nx < w and 0 <= ny < h and (nx, ny) not in seen and grid[ny][nx] != "#":
                    seen.add((nx, ny))
                    todo.append((nx, ny))
    return seen


def spawn_block(grid, corner, count, width, toward):
    """Fills `count` cells in rows of `width`, starting next to the flag."""
    x0, y0 = corner
    dx, dy = toward
    placed = 0
    row = 0
    cells = []
    while placed < count:
        for i in range(width):
            if placed == count:
                break
            cells.append((x0 + dx * i, y0 + dy * row))
            placed += 1
        row += 1
    return cells


def battle_map(w, h, vp, hp, seed, walls, swamps):
    rng = random.Random(seed)
    while True:
        g = blank(w, h)
        vp_flag = (1, h - 2)
        hp_flag = (w - 2, 1)
        vp_width = max(4, min(10, (vp + 5) // 6))
        hp_width = max(4, min(10, (hp + 5) // 6))
        vp_cells = spawn_block(g, (3, h - 2), vp, vp_width, (1, -1))
        hp_cells = spawn_block(g, (w - 4, 1), hp, hp_width, (-1, 1))
        keep = set(vp_cells) | set(hp_cells) | {vp_flag, hp_flag}
        margin = set()
        for x, y in keep:
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    margin.add((x + dx, y + dy))
        for _ in range(walls):
            horizontal = rng.random() < 0.5
            length = rng.randint(3, max(4, min(w, h) // 3))
            x, y = rng.randrange(w), rng.randrange(h)
            for i in range(length):
                cx, cy = (x + i, y) if horizontal else (x, y + i)
                if 0 <= cx < w and 0 <= cy < h and (cx, cy) not in margin:
                    g[cy][cx] = "#"
        for _ in range(swamps):
            cx, cy = rng.randrange(w), rng.randrange(h)
            r = rng.randint(1, 2)
            for y in range(cy - r, cy + r + 1):
                for x in range(cx - r, cx + r + 1):
                    if 0 <= x < w and 0 <= y < h and g[y][x] == "." and (x, y) not in margin:
                        g[y][x] = "~"
        g[vp_flag[1]][vp_flag[0]] = "F"
        g[hp_flag[1]][hp_flag[0]] = "f"
        for x, y in vp_cells:
            g[y][x] = "a"
        for x, y in hp_cells:
            g[y][x] = "b"
        walkable = {(x, y) for y in range(h) for x in range(w) if g[y][x] != "#"}
        if reachable(g, vp_flag) == walkable:
            return g
        seed += 1000
        rng = random.Random(seed)


def arena_20x20():
    """Point symmetric: (x, y) mirrors to (19 - x, 19 - y) with sides swapped."""
    w = h = 20
    g = blank(w, h)
    swap = {"a": "b", "b": "a", "F": "f", "f": "F", "#": "#", "~": "~"}

    def put(x, y, ch):
        g[y][x] = ch
        g[h - 1 - y][w - 1 - x] = swap[ch]

    put(1, 18, "F")
    for i, (x, y) in enumerate([(3, 18), (4, 18), (5, 18), (3, 17), (4, 17), (5, 17), (3, 16), (4, 16)]):
        put(x, y, "a")
    for x in range(6, 11):
        put(x, 13, "#")
    for y in range(9, 13):
        put(6, y, "#")
    for y in range(2, 6):
        put(9, y, "#")
    for x, y in [(11, 8), (12, 8), (11, 9), (12, 9), (2, 10), (3, 10), (2, 11)]:
        put(x, y, "~")
    return g


def write(path, g):
    path.write_text("".join("".join(row) + "\n" for row in g))


def main(root):
    maps = Path(root)
    write(maps / "arena_20x20.map", arena_20x20())
    write(maps / "battle_50x50.map", battle_map(50, 50, 48, 32, 11, walls=40, swamps=14))
    write(maps / "battle_54x46.map", battle_map(54, 46, 43, 43, 12, walls=40, swamps=14))
    write(maps / "battle_50x28.map", battle_map(50, 28, 48, 53, 13, walls=24, swamps=8))
    write(maps / "reduced_a_25x25.map", battle_map(25, 25, 12, 8, 21, walls=10, swamps=4))
    write(maps / "reduced_b_25x25.map", battle_map(25, 25, 11, 11, 22, walls=10, swamps=4))
    write(maps / "reduced_c_25x25.map", battle_map(25, 25, 12, 13, 23, walls=10, swamps=4))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data" / "maps")
