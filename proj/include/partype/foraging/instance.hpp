#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "partype/foraging/types.hpp"
#include "partype/foraging/world.hpp"
#include "partype/rng.hpp"

namespace partype::foraging {

struct WorldPreset {
  std::string name;
  int width = 10;
  int height = 10;
  std::size_t agents = 2;  // including the controlled agent
  std::size_t items = 5;
  int max_steps = 100;
  int rollouts = 300;

  static WorldPreset small() { return {"10x10", 10, 10, 2, 5, 100, 300}; }
  static WorldPreset large() { return {"15x15", 15, 15, 3, 10, 150, 500}; }
  static WorldPreset named(const std::string& name) {
    if (name == "10x10") return small();
    if (name == "15x15") return large();
    throw std::invalid_argument("unknown world preset: " + name);
  }
};

struct TrueModel {
  TypeKind kind = TypeKind::kL1;
  ParameterVector params;
};

struct ForagingInstance {
  std::uint64_t seed = 0;
  ForagingState world;
  std::vector<TrueModel> truth;                                 // per other agent (agent index - 1)
  std::vector<std::vector<ParameterVector>> initial_estimates;  // [other agent][type kind]
};

// Checks the placement and level constraints of a generated world.
inline bool satisfies_generation_constraints(const ForagingState& s) {
  if (s.agents.empty() || s.items.empty()) return false;
  double max_item = 0.0, sum_agents = 0.0;
  for (const auto& i : s.items) max_item = std::max(max_item, i.level);
  for (const auto& a : s.agents) {
    sum_agents += a.level;
    if (!s.in_grid(a.pos)) return false;
  }
  for (const auto& a : s.agents)
    if (!(a.level < max_item)) return false;
  for (const auto& i : s.items) {
    if (i.level > sum_agents) return false;
    if (i.pos.x <= 0 || i.pos.y <= 0 || i.pos.x >= s.width - 1 || i.pos.y >= s.height - 1) return false;
  }
  for (std::size_t i = 0; i < s.items.size(); ++i)
    for (std::size_t j = i + 1; j < s.items.size(); ++j)
      if (!(distance(s.items[i].pos, s.items[j].pos) > 1.0)) return false;
  std::vector<Cell> cells;
  for (const auto& a : s.agents) cells.push_back(a.pos);
  for (const auto& i : s.items) cells.push_back(i.pos);
  std::sort(cells.begin(), cells.end());
  return std::adjacent_find(cells.begin(), cells.end()) == cells.end();
}

inline constexpr int kMaxGenerationAttempts = 100000;

inline ForagingInstance generate_instance(const WorldPreset& preset, std::uint64_t seed) {
  const int interior = (preset.width - 2) * (preset.height - 2);
  if (preset.agents < 1 || preset.items < 1 || interior < static_cast<int>(preset.items) ||
      preset.width * preset.height < static_cast<int>(preset.agents + preset.items))
    throw std::invalid_argument("grid too small for the requested entities");

  Rng rng(derive_seed(seed, {0x67656e}));
  auto rand_cell = [&](int lo_x, int hi_x, int lo_y, int hi_y) {
    return Cell{std::uniform_int_distribution<int>(lo_x, hi_x)(rng), std::uniform_int_distribution<int>(lo_y, hi_y)(rng)};
  };

  ForagingInstance inst;
  inst.seed = seed;
  bool ok = false;
  for (int attempt = 0; attempt < kMaxGenerationAttempts && !ok; ++attempt) {
    ForagingState s;
    s.width = preset.width;
    s.height = preset.height;
    for (std::size_t i = 0; i < preset.items; ++i)
      s.items.push_back({rand_cell(1, preset.width - 2, 1, preset.height - 2), uniform01(rng), false});
    for (std::size_t a = 0; a < preset.agents; ++a) {
      auto heading = static_cast<Heading>(std::uniform_int_distribution<int>(0, 3)(rng));
      s.agents.push_back({rand_cell(0, preset.width - 1, 0, preset.height - 1), uniform01(rng), heading});
    }
    if (satisfies_generation_constraints(s)) {
      inst.world = std::move(s);
      ok = true;
    }
  }
  if (!ok) throw std::runtime_error("no instance satisfying the generation constraints was found");

  for (std::size_t a = 1; a < preset.agents; ++a) {
    TrueModel t;
    t.kind = kAllKinds[std::uniform_int_distribution<std::size_t>(0, kAllKinds.size() - 1)(rng)];
    t.params = ParameterVector({inst.world.agents[a].level, uniform(rng, 0.1, 1.0), uniform(rng, 0.1, 1.0)},
                               foraging_bounds());
    inst.truth.push_back(std::move(t));
  }
  for (std::size_t a = 1; a < preset.agents; ++a) {
    std::vector<ParameterVector> per_type;
    for (std::size_t k = 0; k < kAllKinds.size(); ++k) {
      std::vector<double> v;
      for (const auto& b : foraging_bounds()) v.push_back(uniform(rng, b.lo, b.hi));
      per_type.emplace_back(std::move(v), foraging_bounds());
    }
    inst.initial_estimates.push_back(std::move(per_type));
  }
  return inst;
}

}  // namespace partype::foraging
