#pragma once

// UCT for the controlled agent (agent 0) of the foraging world.
//
// Each rollout samples one type per other agent from the current belief and
// keeps it for the whole rollout; those agents act by sampling their type's
// action distribution under the current parameter estimates. Outcomes of a
// controlled action are keyed by a digest of the resulting world, so
// stochasticity of other agents and of move ordering lives in the child keys.
// Beyond the tree the controlled agent acts uniformly at random. Returns are
// divided by the number of items remaining at the root.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "partype/foraging/types.hpp"
#include "partype/foraging/world.hpp"
#include "partype/rng.hpp"

namespace partype::planner {

using foraging::Action;
using foraging::ForagingState;
using foraging::kNumActions;

struct UctConfig {
  int rollouts = 300;
  int horizon = 100;
  double discount = 0.95;
  double exploration = 2.0;
};

// What the planner knows about one other agent.
struct AgentHypotheses {
  std::size_t agent = 1;                               // index in ForagingState::agents
  std::vector<double> belief;                          // per type kind
  std::vector<foraging::ForagingTypeParams> params;    // per type kind
  std::vector<foraging::ForagingTypeState> states;     // per type kind, internal state at the root
};

struct Edge {
  Action action;
  std::uint64_t digest;
  int child;
};

struct SearchNode {
  int visits = 0;
  std::array<int, kNumActions> action_visits{};
  std::array<double, kNumActions> action_means{};
  std::vector<Edge> children;

  int find_child(Action a, std::uint64_t d) const {
    for (const auto& e : children)
      if (e.action == a && e.digest == d) return e.child;
    return -1;
  }
};

class SearchTree {
 public:
  SearchTree() { nodes_.emplace_back(); }

  const SearchNode& root() const { return nodes_[0]; }
  const SearchNode& node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }
  SearchNode& node(int i) { return nodes_.at(static_cast<std::size_t>(i)); }
  std::size_t size() const { return nodes_.size(); }

  int add_child(int parent, Action a, std::uint64_t d) {
    nodes_.emplace_back();
    int id = static_cast<int>(nodes_.size()) - 1;
    nodes_[static_cast<std::size_t>(parent)].children.push_back({a, d, id});
    return id;
  }

  // Copies the subtree below `new_root` into a fresh tree.
  SearchTree extract(int new_root) const {
    SearchTree out;
    out.nodes_.clear();
    std::vector<std::pair<int, int>> stack{{new_root, 0}};
    out.nodes_.push_back(nodes_.at(static_cast<std::size_t>(new_root)));
    while (!stack.empty()) {
      auto [src, dst] = stack.back();
      stack.pop_back();
      const auto& src_children = nodes_[static_cast<std::size_t>(src)].children;
      for (std::size_t c = 0; c < src_children.size(); ++c) {
        out.nodes_.push_back(nodes_[static_cast<std::size_t>(src_children[c].child)]);
        int dst_child = static_cast<int>(out.nodes_.size()) - 1;
        out.nodes_[static_cast<std::size_t>(dst)].children[c].child = dst_child;
        stack.emplace_back(src_children[c].child, dst_child);
      }
    }
    return out;
  }

 private:
  std::vector<SearchNode> nodes_;
};

// Promotes the child reached by (taken action, observed next state), or
// returns an empty tree if that outcome was never visited.
inline SearchTree reuse_subtree(const SearchTree& tree, Action taken, const ForagingState& observed_next) {
  int child = tree.root().find_child(taken, foraging::digest(observed_next));
  if (child < 0) return SearchTree{};
  return tree.extract(child);
}

class UctPlanner {
 public:
  explicit UctPlanner(UctConfig cfg = {}, foraging::FollowerView view = foraging::FollowerView::kOwn)
      : cfg_(cfg), view_(view) {}

  const UctConfig& config() const { return cfg_; }
  const SearchTree& tree() const { return tree_; }
  void reset() { tree_ = SearchTree{}; }

  Action plan(const ForagingState& state, std::span<const AgentHypotheses> others, std::uint64_t seed) {
    Rng rng(seed);
    const double normaliser = std::max<double>(1.0, static_cast<double>(state.remaining_items()));
    for (int r = 0; r < cfg_.rollouts; ++r) simulate(state, others, normaliser, rng);
    return best_root_action();
  }

  void advance(Action taken, const ForagingState& observed_next) {
    tree_ = reuse_subtree(tree_, taken, observed_next);
  }

  Action best_root_action() const {
    const auto& root = tree_.root();
    std::size_t best = 0;
    for (std::size_t a = 1; a < kNumActions; ++a) {
      if (root.action_visits[a] > root.action_visits[best] ||
          (root.action_visits[a] == root.action_visits[best] && root.action_means[a] > root.action_means[best]))
        best = a;
    }
    return static_cast<Action>(best);
  }

 private:
  struct Sampled {
    std::size_t agent;
    foraging::TypeKind kind;
    foraging::ForagingTypeParams params;
    foraging::ForagingTypeState state;
  };

  std::size_t select_action(const SearchNode& n) const {
    for (std::size_t a = 0; a < kNumActions; ++a)
      if (n.action_visits[a] == 0) return a;
    const double log_n = std::log(static_cast<double>(n.visits));
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < kNumActions; ++a) {
      double score = n.action_means[a] + cfg_.exploration * std::sqrt(log_n / n.action_visits[a]);
      if (score > best_score) {
        best_score = score;
        best = a;
      }
    }
    return best;
  }

  static std::size_t sample_index(std::span<const double> probs, Rng& rng) {
    double u = uniform01(rng), acc = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (probs[i] <= 0.0) continue;
      acc += probs[i];
      last = i;
      if (u < acc) return i;
    }
    return last;
  }

  // Samples the other agents' actions into joint[1..] and steps the world.
  int step_sim(ForagingState& sim, std::vector<Sampled>& others, std::vector<Action>& joint, Rng& rng) const {
    for (auto& o : others) {
      auto probs = foraging::foraging_policy(o.kind, o.state, o.params, sim, o.agent, view_);
      joint[o.agent] = static_cast<Action>(sample_index(probs, rng));
    }
    return foraging::apply_joint_action(sim, joint, rng);
  }

  void simulate(const ForagingState& root_state, std::span<const AgentHypotheses> hyps, double normaliser,
                Rng& rng) {
    ForagingState sim = root_state;
    std::vector<Sampled> others;
    others.reserve(hyps.size());
    for (const auto& h : hyps) {
      std::size_t k = sample_index(h.belief, rng);
      others.push_back({h.agent, foraging::kAllKinds[k], h.params[k], h.states[k]});
    }
    std::vector<Action> joint(sim.agents.size(), Action::kLoad);

    struct Visit {
      int node;
      std::size_t action;
      int reward;
    };
    std::vector<Visit> path;
    int node = 0;
    int depth = 0;
    while (depth < cfg_.horizon && !sim.all_collected()) {
      std::size_t a = select_action(tree_.node(node));
      joint[0] = static_cast<Action>(a);
      int reward = step_sim(sim, others, joint, rng);
      path.push_back({node, a, reward});
      ++depth;
      std::uint64_t d = foraging::digest(sim);
      int child = tree_.node(node).find_child(static_cast<Action>(a), d);
      if (child < 0) {
        tree_.add_child(node, static_cast<Action>(a), d);
        break;
      }
      node = child;
    }

    // Default policy beyond the frontier.
    double tail = 0.0, scale = 1.0;
    std::uniform_int_distribution<std::size_t> pick(0, kNumActions - 1);
    while (depth < cfg_.horizon && !sim.all_collected()) {
      joint[0] = static_cast<Action>(pick(rng));
      tail += scale * step_sim(sim, others, joint, rng);
      scale *= cfg_.discount;
      ++depth;
    }

    double ret = tail;
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      ret = it->reward + cfg_.discount * ret;
      auto& n = tree_.node(it->node);
      ++n.visits;
      int& na = n.action_visits[it->action];
      ++na;
      n.action_means[it->action] += (ret / normaliser - n.action_means[it->action]) / na;
    }
  }

  UctConfig cfg_;
  foraging::FollowerView view_;
  SearchTree tree_;
};

}  // namespace partype::planner
