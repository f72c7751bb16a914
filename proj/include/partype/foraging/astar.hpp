#pragma once

// Shortest 4-connected paths on the foraging grid.

#include <cstdint>
#include <limits>
#include <queue>
#include <tuple>
#include <vector>

#include "partype/foraging/world.hpp"

namespace partype::foraging {

namespace detail {

inline int manhattan(Cell a, Cell b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

// Legal move that brings `from` closest to `to` in straight-line distance.
inline Action greedy_move(const ForagingState& s, Cell from, Cell to) {
  Action best = Action::kNorth;
  double best_d = std::numeric_limits<double>::infinity();
  bool found = false;
  for (Action a : kMoves) {
    Cell c = moved(from, a);
    if (!s.in_grid(c) || (c != to && s.occupied(c))) continue;
    double d = distance(c, to);
    if (d < best_d) {
      best_d = d;
      best = a;
      found = true;
    }
  }
  if (found) return best;
  // Boxed in: pick the direction toward the target regardless of legality.
  for (Action a : kMoves) {
    double d = distance(moved(from, a), to);
    if (d < best_d) {
      best_d = d;
      best = a;
    }
  }
  return best;
}

}  // namespace detail

// A* from `from` to `to`. Agents and uncollected items are obstacles, except
// the destination cell. Expansion order N, E, S, W makes ties deterministic.
// If `to` is unreachable, returns the single greedy move toward it.
inline std::vector<Action> astar_path(const ForagingState& s, Cell from, Cell to) {
  if (from == to) return {};
  const int w = s.width, h = s.height;
  const int n = w * h;
  auto id = [w](Cell c) { return c.y * w + c.x; };

  std::vector<std::uint8_t> blocked(static_cast<std::size_t>(n), 0);
  for (const auto& a : s.agents)
    if (s.in_grid(a.pos)) blocked[id(a.pos)] = 1;
  for (const auto& it : s.items)
    if (!it.collected && s.in_grid(it.pos)) blocked[id(it.pos)] = 1;
  if (s.in_grid(to)) blocked[id(to)] = 0;
  blocked[id(from)] = 0;

  constexpr int kInf = std::numeric_limits<int>::max();
  std::vector<int> g(static_cast<std::size_t>(n), kInf);
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  std::vector<std::uint8_t> via(static_cast<std::size_t>(n), 0);
  std::vector<std::uint8_t> closed(static_cast<std::size_t>(n), 0);

  // (f, h, insertion counter, cell); smallest first.
  using Entry = std::tuple<int, int, int, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  int counter = 0;
  g[id(from)] = 0;
  open.emplace(detail::manhattan(from, to), detail::manhattan(from, to), counter++, id(from));

  const int goal = s.in_grid(to) ? id(to) : -1;
  bool reached = false;
  while (!open.empty()) {
    auto [f, hh, cnt, cur] = open.top();
    open.pop();
    if (closed[cur]) continue;
    closed[cur] = 1;
    if (cur == goal) {
      reached = true;
      break;
    }
    Cell c{cur % w, cur / w};
    for (Action a : kMoves) {
      Cell nb = moved(c, a);
      if (!s.in_grid(nb)) continue;
      int nid = id(nb);
      if (blocked[nid] || closed[nid]) continue;
      int ng = g[cur] + 1;
      if (ng < g[nid]) {
        g[nid] = ng;
        parent[nid] = cur;
        via[nid] = static_cast<std::uint8_t>(index_of(a));
        int hn = detail::manhattan(nb, to);
        open.emplace(ng + hn, hn, counter++, nid);
      }
    }
  }

  if (!reached) return {detail::greedy_move(s, from, to)};
  std::vector<Action> path;
  for (int cur = goal; cur != id(from); cur = parent[cur]) path.push_back(static_cast<Action>(via[cur]));
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace partype::foraging
