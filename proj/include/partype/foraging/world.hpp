#pragma once

// Level-based foraging grid world.
//
// Cells are (x, y) with x in [0, width) and y in [0, height); N increases y.
// Items and agents occupy cells and block movement. An item is collected when
// the agents next to it (4-neighbourhood) that chose `load` have pooled levels
// at least as high as the item's level.

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "partype/rng.hpp"

namespace partype::foraging {

enum class Action : std::uint8_t { kNorth = 0, kEast = 1, kSouth = 2, kWest = 3, kLoad = 4 };
inline constexpr std::size_t kNumActions = 5;
inline constexpr std::array<Action, 4> kMoves{Action::kNorth, Action::kEast, Action::kSouth, Action::kWest};

// Facing direction; uses the same encoding as the four move actions.
enum class Heading : std::uint8_t { kNorth = 0, kEast = 1, kSouth = 2, kWest = 3 };

inline std::string_view to_string(Action a) {
  switch (a) {
    case Action::kNorth: return "N";
    case Action::kEast: return "E";
    case Action::kSouth: return "S";
    case Action::kWest: return "W";
    case Action::kLoad: return "load";
  }
  return "?";
}

inline Action parse_action(std::string_view s) {
  if (s == "N") return Action::kNorth;
  if (s == "E") return Action::kEast;
  if (s == "S") return Action::kSouth;
  if (s == "W") return Action::kWest;
  if (s == "load") return Action::kLoad;
  throw std::invalid_argument("unknown action: " + std::string(s));
}

inline Action action_from_index(std::size_t i) {
  if (i >= kNumActions) throw std::invalid_argument("malformed action index");
  return static_cast<Action>(i);
}

inline std::size_t index_of(Action a) { return static_cast<std::size_t>(a); }

struct Cell {
  int x = 0;
  int y = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  // Lexicographic by (row, column), used for deterministic tie-breaks.
  friend auto operator<=>(const Cell& a, const Cell& b) {
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
};

inline Cell moved(Cell c, Action a) {
  switch (a) {
    case Action::kNorth: return {c.x, c.y + 1};
    case Action::kEast: return {c.x + 1, c.y};
    case Action::kSouth: return {c.x, c.y - 1};
    case Action::kWest: return {c.x - 1, c.y};
    case Action::kLoad: return c;
  }
  return c;
}

inline bool adjacent(Cell a, Cell b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y) == 1; }

// Euclidean distance between cell centres.
inline double distance(Cell a, Cell b) { return std::hypot(double(a.x - b.x), double(a.y - b.y)); }

struct AgentState {
  Cell pos;
  double level = 0.0;
  Heading heading = Heading::kNorth;

  friend bool operator==(const AgentState&, const AgentState&) = default;
};

struct Item {
  Cell pos;
  double level = 0.0;
  bool collected = false;

  friend bool operator==(const Item&, const Item&) = default;
};

struct ForagingState {
  int width = 0;
  int height = 0;
  std::vector<AgentState> agents;  // agent 0 is the controlled agent
  std::vector<Item> items;
  int step = 0;

  bool in_grid(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; }

  // Index of the uncollected item on c, if any.
  std::optional<std::size_t> item_at(Cell c) const {
    for (std::size_t i = 0; i < items.size(); ++i)
      if (!items[i].collected && items[i].pos == c) return i;
    return std::nullopt;
  }

  std::optional<std::size_t> agent_at(Cell c) const {
    for (std::size_t i = 0; i < agents.size(); ++i)
      if (agents[i].pos == c) return i;
    return std::nullopt;
  }

  bool occupied(Cell c) const { return agent_at(c).has_value() || item_at(c).has_value(); }

  std::size_t remaining_items() const {
    return static_cast<std::size_t>(std::count_if(items.begin(), items.end(), [](const Item& i) { return !i.collected; }));
  }
  bool all_collected() const { return remaining_items() == 0; }

  friend bool operator==(const ForagingState&, const ForagingState&) = default;
};

// Applies a joint action in place and returns the team reward (items collected).
// Loads resolve first; moves then execute in a random agent order.
inline int apply_joint_action(ForagingState& s, std::span<const Action> actions, Rng& rng) {
  if (actions.size() != s.agents.size()) throw std::invalid_argument("joint action size does not match agent count");
  for (Action a : actions)
    if (index_of(a) >= kNumActions) throw std::invalid_argument("malformed action");

  int reward = 0;
  for (auto& item : s.items) {
    if (item.collected) continue;
    double pooled = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < s.agents.size(); ++i) {
      if (actions[i] == Action::kLoad && adjacent(s.agents[i].pos, item.pos)) {
        pooled += s.agents[i].level;
        any = true;
      }
    }
    if (any && pooled >= item.level) {
      item.collected = true;
      ++reward;
    }
  }

  std::array<std::size_t, 16> order_buf{};
  std::vector<std::size_t> order_vec;
  std::span<std::size_t> order;
  if (s.agents.size() <= order_buf.size()) {
    order = std::span<std::size_t>(order_buf.data(), s.agents.size());
  } else {
    order_vec.resize(s.agents.size());
    order = order_vec;
  }
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i : order) {
    Action a = actions[i];
    if (a == Action::kLoad) continue;
    Cell target = moved(s.agents[i].pos, a);
    if (!s.in_grid(target) || s.occupied(target)) continue;
    s.agents[i].pos = target;
    s.agents[i].heading = static_cast<Heading>(index_of(a));
  }
  ++s.step;
  return reward;
}

struct StepOutcome {
  ForagingState state;
  int reward = 0;
};

inline StepOutcome step_world(const ForagingState& s, std::span<const Action> joint_actions, std::uint64_t seed) {
  StepOutcome out{s, 0};
  Rng rng(seed);
  out.reward = apply_joint_action(out.state, joint_actions, rng);
  return out;
}

// Hash of everything that can differ between sibling outcomes of one step.
inline std::uint64_t digest(const ForagingState& s) {
  std::uint64_t h = 0x12345678abcdefULL;
  for (const auto& a : s.agents) {
    h = mix64(h ^ (static_cast<std::uint64_t>(a.pos.x) << 32 | static_cast<std::uint32_t>(a.pos.y)));
    h = mix64(h ^ static_cast<std::uint64_t>(a.heading));
  }
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < s.items.size(); ++i)
    if (s.items[i].collected) bits |= 1ULL << (i % 64);
  return mix64(h ^ bits);
}

}  // namespace partype::foraging
