#pragma once

// Parameterised foraging behaviours. All four share one template: keep the
// remembered destination until it is reached, otherwise pick a new target
// from what is visible; then load if next to a destination item, else take
// the first step of a shortest path; finally mix 0.01 into every action.
//
// Parameters: skill level in [0,1], view radius fraction in [0.1,1], view
// angle fraction in [0.1,1]. The remembered destination depends on past
// parameter values, so none of them is Markovian.

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "partype/action_distribution.hpp"
#include "partype/foraging/astar.hpp"
#include "partype/foraging/visibility.hpp"
#include "partype/foraging/world.hpp"
#include "partype/params.hpp"
#include "partype/type_model.hpp"

namespace partype::foraging {

enum class TypeKind : std::uint8_t { kL1 = 0, kL2 = 1, kF1 = 2, kF2 = 3 };
inline constexpr std::array<TypeKind, 4> kAllKinds{TypeKind::kL1, TypeKind::kL2, TypeKind::kF1, TypeKind::kF2};

inline std::string_view to_string(TypeKind k) {
  switch (k) {
    case TypeKind::kL1: return "L1";
    case TypeKind::kL2: return "L2";
    case TypeKind::kF1: return "F1";
    case TypeKind::kF2: return "F2";
  }
  return "?";
}

inline TypeKind parse_kind(std::string_view s) {
  for (auto k : kAllKinds)
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown foraging type: " + std::string(s));
}

// Whose view cone a follower uses when predicting what its leader sees.
enum class FollowerView : std::uint8_t {
  kOwn,         // the follower's own radius/angle fractions, from the leader's cell and heading
  kOmniscient,  // the leader is assumed to see every item
};

inline constexpr double kActionMixing = 0.01;

inline const std::vector<Interval>& foraging_bounds() {
  static const std::vector<Interval> b{{0.0, 1.0}, {0.1, 1.0}, {0.1, 1.0}};
  return b;
}

struct ForagingTypeParams {
  double skill = 0.5;
  double view_radius = 0.5;
  double view_angle = 0.5;

  static ForagingTypeParams from(const ParameterVector& p) {
    if (p.size() != 3) throw BoundsError("foraging types have three parameters");
    return {p[0], p[1], p[2]};
  }
  ParameterVector to_vector() const { return ParameterVector({skill, view_radius, view_angle}, foraging_bounds()); }
};

struct ForagingTypeState {
  std::optional<Cell> mem;
  friend bool operator==(const ForagingTypeState&, const ForagingTypeState&) = default;
};

// ---------------------------------------------------------------------------
// Target selection

namespace detail {

// Furthest entity from `from`; ties go to the lexicographically smallest cell.
template <class PosFn>
std::optional<std::size_t> furthest(std::span<const std::size_t> ids, Cell from, PosFn pos) {
  std::optional<std::size_t> best;
  double best_d = -1.0;
  for (std::size_t i : ids) {
    double d = distance(from, pos(i));
    if (d > best_d || (d == best_d && pos(i) < pos(*best))) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

// Highest level among ids satisfying pred; ties go to the smallest cell.
template <class LevelFn, class PosFn, class Pred>
std::optional<std::size_t> highest_level(std::span<const std::size_t> ids, LevelFn level, PosFn pos, Pred pred) {
  std::optional<std::size_t> best;
  for (std::size_t i : ids) {
    if (!pred(i)) continue;
    if (!best || level(i) > level(*best) || (level(i) == level(*best) && pos(i) < pos(*best))) best = i;
  }
  return best;
}

}  // namespace detail

// Furthest visible item from `from`.
inline std::optional<Cell> choose_target_l1(const ForagingState& s, Cell from, std::span<const std::size_t> items) {
  auto i = detail::furthest(items, from, [&](std::size_t k) { return s.items[k].pos; });
  if (!i) return std::nullopt;
  return s.items[*i].pos;
}

// Highest-level item strictly below own level, else highest-level item.
inline std::optional<Cell> choose_target_l2(const ForagingState& s, std::span<const std::size_t> items,
                                            double own_level) {
  auto level = [&](std::size_t k) { return s.items[k].level; };
  auto pos = [&](std::size_t k) { return s.items[k].pos; };
  auto below = detail::highest_level(items, level, pos, [&](std::size_t k) { return level(k) < own_level; });
  if (below) return s.items[*below].pos;
  auto any = detail::highest_level(items, level, pos, [](std::size_t) { return true; });
  if (any) return s.items[*any].pos;
  return std::nullopt;
}

inline Visible leader_view(const ForagingState& s, std::size_t leader, const ForagingTypeParams& p,
                           FollowerView view) {
  if (view == FollowerView::kOmniscient) return visible_from(s, leader, 1.0, 1.0);
  return visible_from(s, leader, p.view_radius, p.view_angle);
}

inline std::optional<Cell> choose_target_f1(const ForagingState& s, std::size_t self, const Visible& vis,
                                            const ForagingTypeParams& p, FollowerView view) {
  const Cell me = s.agents[self].pos;
  auto leader = detail::furthest(std::span<const std::size_t>(vis.agents), me,
                                 [&](std::size_t k) { return s.agents[k].pos; });
  if (!leader) return std::nullopt;
  if (vis.items.empty()) return s.agents[*leader].pos;
  auto lv = leader_view(s, *leader, p, view);
  return choose_target_l1(s, s.agents[*leader].pos, lv.items);
}

inline std::optional<Cell> choose_target_f2(const ForagingState& s, std::size_t self, const Visible& vis,
                                            const ForagingTypeParams& p, FollowerView view) {
  const Cell me = s.agents[self].pos;
  auto level = [&](std::size_t k) { return s.agents[k].level; };
  auto pos = [&](std::size_t k) { return s.agents[k].pos; };
  auto leader = detail::highest_level(std::span<const std::size_t>(vis.agents), level, pos,
                                      [&](std::size_t k) { return level(k) > p.skill; });
  if (!leader) leader = detail::furthest(std::span<const std::size_t>(vis.agents), me, pos);
  if (!leader) return std::nullopt;
  if (vis.items.empty()) return s.agents[*leader].pos;
  auto lv = leader_view(s, *leader, p, view);
  return choose_target_l2(s, lv.items, s.agents[*leader].level);
}

inline std::optional<Cell> choose_target(TypeKind kind, const ForagingState& s, std::size_t self, const Visible& vis,
                                         const ForagingTypeParams& p, FollowerView view) {
  switch (kind) {
    case TypeKind::kL1: return choose_target_l1(s, s.agents[self].pos, vis.items);
    case TypeKind::kL2: return choose_target_l2(s, vis.items, p.skill);
    case TypeKind::kF1: return choose_target_f1(s, self, vis, p, view);
    case TypeKind::kF2: return choose_target_f2(s, self, vis, p, view);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Template step

using ActionProbs = std::array<double, kNumActions>;

// Action distribution of agent `self` in world `s`; updates the destination memory.
inline ActionProbs foraging_policy(TypeKind kind, ForagingTypeState& st, const ForagingTypeParams& p,
                                   const ForagingState& s, std::size_t self,
                                   FollowerView view = FollowerView::kOwn) {
  const Cell loc = s.agents.at(self).pos;
  std::optional<Cell> dest;
  if (st.mem && *st.mem != loc) {
    dest = st.mem;
  } else {
    auto vis = visible_from(s, self, p.view_radius, p.view_angle);
    dest = choose_target(kind, s, self, vis, p, view);
  }
  st.mem = dest;

  ActionProbs w{};
  if (!dest) {
    for (Action a : kMoves) w[index_of(a)] = 0.25;
  } else if (s.item_at(*dest) && adjacent(loc, *dest)) {
    w[index_of(Action::kLoad)] = 1.0;
  } else {
    auto path = astar_path(s, loc, *dest);
    if (!path.empty()) w[index_of(path.front())] = 1.0;
    else w[index_of(Action::kLoad)] = 1.0;
  }
  double total = 0.0;
  for (double& v : w) {
    v += kActionMixing;
    total += v;
  }
  for (double& v : w) v /= total;
  return w;
}

struct ForagingStepResult {
  ActionDistribution distribution;
  ForagingTypeState state;
};

inline ForagingStepResult foraging_type_step(TypeKind kind, const ForagingTypeState& st, const ForagingTypeParams& p,
                                             const ForagingState& world, std::size_t self,
                                             FollowerView view = FollowerView::kOwn) {
  ForagingTypeState next = st;
  auto probs = foraging_policy(kind, next, p, world, self, view);
  return {ActionDistribution(std::vector<double>(probs.begin(), probs.end())), next};
}

// ---------------------------------------------------------------------------
// Observations and the TypeModel adapter

// What the controlled agent sees at a step: the full world and everybody's
// previous action (empty at step 0).
struct ForagingObservation {
  ForagingState world;
  std::vector<Action> previous_actions;

  int step() const { return world.step; }
};

class ForagingType final : public TypeModel<ForagingObservation> {
 public:
  ForagingType(TypeKind kind, std::size_t agent, FollowerView view = FollowerView::kOwn)
      : kind_(kind), agent_(agent), view_(view) {}

  std::unique_ptr<TypeModel<ForagingObservation>> clone() const override {
    return std::make_unique<ForagingType>(*this);
  }
  std::string name() const override { return std::string(to_string(kind_)); }
  const std::vector<Interval>& bounds() const override { return foraging_bounds(); }
  std::vector<bool> markovian() const override { return {false, false, false}; }
  std::size_t num_actions() const override { return kNumActions; }
  void reset() override { state_ = {}; }

  ActionDistribution step(const ForagingObservation& obs, const ParameterVector& params) override {
    auto probs = foraging_policy(kind_, state_, ForagingTypeParams::from(params), obs.world, agent_, view_);
    return ActionDistribution(std::vector<double>(probs.begin(), probs.end()));
  }

  TypeKind kind() const { return kind_; }
  std::size_t agent() const { return agent_; }
  FollowerView view() const { return view_; }
  const ForagingTypeState& state() const { return state_; }

 private:
  TypeKind kind_;
  std::size_t agent_;
  FollowerView view_;
  ForagingTypeState state_;
};

inline HypotheticalType<ForagingObservation> make_foraging_type(TypeKind kind, std::size_t agent,
                                                                FollowerView view = FollowerView::kOwn) {
  return HypotheticalType<ForagingObservation>(std::make_unique<ForagingType>(kind, agent, view));
}

inline const ForagingTypeState& foraging_state_of(const HypotheticalType<ForagingObservation>& t) {
  return dynamic_cast<const ForagingType&>(t.model()).state();
}

}  // namespace partype::foraging
