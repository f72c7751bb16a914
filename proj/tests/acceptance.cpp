// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.
// Usage: acceptance [criterion numbers...]   (default: all)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "partype/belief.hpp"
#include "partype/estimation.hpp"
#include "partype/foraging/astar.hpp"
#include "partype/gp.hpp"
#include "partype/harness/batch.hpp"
#include "partype/selection.hpp"
#include "test_types.hpp"

using namespace partype;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) detail << "; ";
      pass = false;
      detail << what;
    }
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// ---------------------------------------------------------------------------
// 1. Property suite

void check_belief(Outcome& o, Rng& rng) {
  double worst_sum = 0.0, worst_scale = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> prior(4), lik(4), scaled(4);
    double z = 0.0;
    for (double& p : prior) z += (p = uniform01(rng) + 1e-3);
    for (double& p : prior) p /= z;
    double c = uniform(rng, 1e-3, 1e3);
    for (int k = 0; k < 4; ++k) scaled[k] = c * (lik[k] = uniform01(rng));
    auto a = update_belief(TypeBelief(prior), lik);
    auto b = update_belief(TypeBelief(prior), scaled);
    worst_sum = std::max(worst_sum, std::abs(std::accumulate(a.probs().begin(), a.probs().end(), 0.0) - 1.0));
    for (int k = 0; k < 4; ++k) worst_scale = std::max(worst_scale, std::abs(a[k] - b[k]));
  }
  o.check(worst_sum < 1e-12, "belief sum off by " + std::to_string(worst_sum));
  o.check(worst_scale < 1e-12, "belief rescaling differs by " + std::to_string(worst_scale));
}

void check_bandit_reward(Outcome& o, Rng& rng) {
  const auto& fb = foraging::foraging_bounds();
  ParameterVector mid({0.5, 0.5, 0.5}, fb), shifted({0.6, 0.6, 0.6}, fb);
  ParameterVector lo({0.0, 0.1, 0.1}, fb), hi({1.0, 1.0, 1.0}, fb);
  o.check(bandit_reward(mid, mid) == 0.0, "reward(p, p) != 0");
  o.check(std::abs(bandit_reward(lo, hi) - 1.0) < 1e-12, "reward(lo, hi) != 1");
  o.check(std::abs(bandit_reward(shifted, mid) - 0.3 / 2.8) < 1e-12, "reward != 0.3/2.8");
  for (int i = 0; i < 1000; ++i) {
    double r = bandit_reward(testing::random_foraging_params(rng), testing::random_foraging_params(rng));
    if (r < 0.0 || r > 1.0) {
      o.check(false, "reward outside [0, 1]");
      break;
    }
  }
}

void check_polynomials(Outcome& o, Rng& rng) {
  double worst_fit = 0.0, worst_fd = 0.0, worst_mass = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const Interval b = trial % 2 ? Interval{0.0, 1.0} : Interval{0.1, 1.0};
    std::vector<double> c(1 + trial % 5);
    for (double& v : c) v = uniform(rng, -3, 3);
    Polynomial gen(c, b);
    std::vector<Sample> s;
    for (double x : b.grid(kProfilePoints)) s.push_back({x, gen(x)});
    auto fit = fit_polynomial(s, kFitDegree, b);
    for (int i = 0; i <= 50; ++i) {
      double x = b.lo + b.width() * i / 50.0;
      worst_fit = std::max(worst_fit, std::abs(fit(x) - gen(x)));
    }
    auto d = fit.derivative();
    for (int i = 1; i < 50; ++i) {
      double x = b.lo + b.width() * i / 50.0, h = 1e-5;
      worst_fd = std::max(worst_fd, std::abs(d(x) - (fit(x + h) - fit(x - h)) / (2 * h)));
    }
    auto post = abu_marginal_update(ParameterPosterior::uniform(std::vector<Interval>{b}).marginals[0], fit);
    worst_mass = std::max(worst_mass, std::abs(post.abs_integral() - 1.0));
  }
  o.check(worst_fit < 1e-9, "fit residual " + std::to_string(worst_fit));
  o.check(worst_fd < 1e-6, "derivative vs finite differences " + std::to_string(worst_fd));
  o.check(worst_mass < 1e-6, "posterior mass off by " + std::to_string(worst_mass));
}

void check_gp(Outcome& o, Rng& rng) {
  double worst_mean = 0.0, worst_var = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    GpSurrogate gp;
    gp.length_scales.assign(3, 0.3);
    for (auto& u : halton_design(10, 3, rng)) {
      gp.x.push_back(u);
      gp.y.push_back(uniform(rng, -2, 2));
    }
    FittedGp model(gp);
    for (std::size_t i = 0; i < gp.x.size(); ++i) {
      auto p = model(gp.x[i]);
      worst_mean = std::max(worst_mean, std::abs(p.mean - gp.y[i]));
      worst_var = std::max(worst_var, p.variance);
    }
  }
  o.check(worst_mean < 1e-6, "GP mean error at data " + std::to_string(worst_mean));
  o.check(worst_var <= 1e-6, "GP variance at data " + std::to_string(worst_var));
  o.check(std::abs(expected_improvement(0.0, 1.0, 0.0) - 0.398942) < 1e-6, "EI(0, 1, 0) != 0.398942");
}

void check_astar(Outcome& o, Rng& rng) {
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    foraging::ForagingState s;
    s.width = s.height = 10;
    for (int i = 0; i < 25; ++i) s.items.push_back({{int(rng() % 10), int(rng() % 10)}, 0.5, false});
    foraging::Cell from, to;
    do {
      from = {int(rng() % 10), int(rng() % 10)};
      to = {int(rng() % 10), int(rng() % 10)};
    } while (s.occupied(from) || from == to);
    const int want = testing::bfs_distance(s, from, to);
    const auto path = foraging::astar_path(s, from, to);
    if (want < 0) {
      mismatches += path.size() != 1;
      continue;
    }
    bool ok = static_cast<int>(path.size()) == want;
    auto c = from;
    for (std::size_t k = 0; ok && k < path.size(); ++k) {
      c = foraging::moved(c, path[k]);
      ok = s.in_grid(c) && (k + 1 == path.size() || !s.occupied(c));
    }
    mismatches += !(ok && c == to);
  }
  o.check(mismatches == 0, std::to_string(mismatches) + " A* paths differ from BFS");
}

void check_replay_equivalence(Outcome& o, Rng& rng) {
  int mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto history = testing::random_history(50000 + trial, 30);
    auto all = testing::cview(history);
    auto kind = foraging::kAllKinds[trial % 4];
    auto p = testing::random_foraging_params(rng), q = testing::random_foraging_params(rng);
    const std::size_t split = 1 + rng() % (history.size() - 2);
    auto live = foraging::make_foraging_type(kind, 1);
    for (const auto& obs : all.first(split)) live.step(obs, p);
    live = replay_internal_state(live, all.first(split), q);
    auto fresh = foraging::make_foraging_type(kind, 1);
    for (const auto& obs : all.first(split)) fresh.step(obs, q);
    bool same = true;
    for (std::size_t t = split; t < history.size(); ++t) same &= live.step(history[t], q) == fresh.step(history[t], q);
    same &= foraging::foraging_state_of(live) == foraging::foraging_state_of(fresh);
    mismatches += !same;
  }
  o.check(mismatches == 0, std::to_string(mismatches) + "/100 replay mismatches");
}

Outcome criterion_properties() {
  Outcome o;
  auto t0 = Clock::now();
  Rng rng(20240601);
  check_belief(o, rng);
  check_bandit_reward(o, rng);
  check_polynomials(o, rng);
  check_gp(o, rng);
  check_astar(o, rng);
  check_replay_equivalence(o, rng);
  double secs = seconds_since(t0);
  o.check(secs < 60.0, "took " + std::to_string(secs) + " s");
  if (o.pass) o.detail << "all properties hold (" << secs << " s)";
  return o;
}

// ---------------------------------------------------------------------------
// Desk-scale batches on the 10x10 preset

harness::ExperimentConfig desk(const std::string& estimator, SelectionPolicy sel, std::size_t ego_budget = 10) {
  harness::ExperimentConfig c;
  harness::set_estimator(c, estimator);
  c.selection = sel;
  c.ego_budget = ego_budget;
  c.world = "10x10";
  c.rollouts = 300;
  c.instances = 50;
  c.seed = 1;
  return c;
}

class Batches {
 public:
  const harness::BatchSummary& get(const std::string& estimator, SelectionPolicy sel) {
    auto cfg = desk(estimator, sel);
    auto key = cfg.describe();
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    auto t0 = Clock::now();
    auto res = harness::run_batch(cfg);
    std::fprintf(stderr, "  [%s] completion %.2f, final belief %.3f, final error %.3f/%.3f/%.3f (%.0f s)\n",
                 key.c_str(), res.summary.completion_rate, res.summary.belief_final, res.summary.error_final[0],
                 res.summary.error_final[1], res.summary.error_final[2], seconds_since(t0));
    return cache_.emplace(key, std::move(res.summary)).first->second;
  }

 private:
  std::map<std::string, harness::BatchSummary> cache_;
};

std::string pct(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.0f%%", 100.0 * r);
  return buf;
}

Outcome criterion_completion(Batches& b) {
  Outcome o;
  const double cor = b.get("cor", SelectionPolicy::kUcb1).completion_rate;
  const double rnd = b.get("rnd", SelectionPolicy::kUcb1).completion_rate;
  const double aga = b.get("aga", SelectionPolicy::kUcb1).completion_rate;
  const double abu = b.get("abu", SelectionPolicy::kUcb1).completion_rate;
  const double ego = b.get("ego", SelectionPolicy::kUcb1).completion_rate;
  const double eps = 1e-9;
  o.check(cor - rnd >= 0.15 - eps, "Cor - Rnd gap below 15 points");
  for (auto [name, r] : {std::pair{"AGA", aga}, {"ABU", abu}, {"EGO-10", ego}}) {
    o.check(r >= rnd - 0.05 - eps, std::string(name) + " below Rnd - 5");
    o.check(r <= cor + 0.05 + eps, std::string(name) + " above Cor + 5");
  }
  o.check(ego >= aga - 0.05 - eps, "EGO below AGA - 5");
  o.detail << (o.pass ? "" : " | ") << "Cor " << pct(cor) << ", Rnd " << pct(rnd) << ", AGA " << pct(aga) << ", ABU "
           << pct(abu) << ", EGO-10 " << pct(ego);
  return o;
}

Outcome criterion_abu_error(Batches& b) {
  Outcome o;
  const auto& s = b.get("abu", SelectionPolicy::kAll);
  const auto& e0 = s.error_by_step.at(0);
  std::array<double, 3> worst{};
  for (std::size_t p = 0; p < 3; ++p) {
    double w = s.error_final[p];
    for (std::size_t t = 5; t < 15 && t < s.error_by_step.size(); ++t) w = std::max(w, s.error_by_step[t][p]);
    worst[p] = w;
    o.check(w < e0[p], "parameter " + std::to_string(p + 1) + " not below its step-0 error");
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "%sstep-0 error %.3f/%.3f/%.3f, worst of steps 5-14 and final %.3f/%.3f/%.3f",
                o.pass ? "" : " | ", e0[0], e0[1], e0[2], worst[0], worst[1], worst[2]);
  o.detail << buf;
  return o;
}

Outcome criterion_belief(Batches& b) {
  Outcome o;
  const double cor = b.get("cor", SelectionPolicy::kUcb1).belief_final;
  const double rnd = b.get("rnd", SelectionPolicy::kUcb1).belief_final;
  const double abu = b.get("abu", SelectionPolicy::kAll).belief_final;
  const double ego = b.get("ego", SelectionPolicy::kAll).belief_final;
  o.check(cor >= 0.9, "Cor final belief below 0.9");
  o.check(abu > rnd, "ABU final belief not above Rnd");
  o.check(ego > rnd, "EGO-10 final belief not above Rnd");
  char buf[200];
  std::snprintf(buf, sizeof buf, "%sCor %.3f, Rnd %.3f, ABU %.3f, EGO-10 %.3f", o.pass ? "" : " | ", cor, rnd, abu,
                ego);
  o.detail << buf;
  return o;
}

// ---------------------------------------------------------------------------
// 5. Update cost ordering on a shared recorded history

Outcome criterion_timing() {
  Outcome o;
  harness::ExperimentConfig cfg = desk("cor", SelectionPolicy::kUcb1);
  std::vector<foraging::ForagingObservation> history;
  std::vector<std::size_t> actions;  // agent 1's action at history[t]
  std::vector<foraging::ForagingInstance> insts;
  for (std::size_t i = 0; insts.empty() && i < 10; ++i) {
    auto inst = harness::make_instance(cfg, i);
    auto rec = harness::run_episode(inst, cfg);
    if (rec.trajectory.steps.size() < 20) continue;
    history.clear();
    actions.clear();
    auto s = inst.world;
    history.push_back({s, {}});
    for (const auto& st : rec.trajectory.steps) {
      actions.push_back(foraging::index_of(st.actions[1]));
      s = foraging::step_world(s, st.actions, st.order_seed).state;
      history.push_back({s, st.actions});
    }
    history.pop_back();
    insts = {inst};
    break;
  }
  if (insts.empty()) {
    o.check(false, "no recorded history of at least 20 steps");
    return o;
  }
  const auto& inst = insts[0];
  auto all = testing::cview(history);
  const auto n = history.size();

  std::array<double, 4> total{};  // AGA, ABU, EGO-10, EGO-20
  std::size_t calls = 0;
  for (int rep = 0; rep < 3; ++rep) {
    for (std::size_t t = 1; t <= n; ++t) {
      auto upto = all.first(t);
      std::span<const std::size_t> acts(actions.data(), t);
      for (std::size_t k = 0; k < 4; ++k) {
        auto type = foraging::make_foraging_type(foraging::kAllKinds[k], 1);
        type = replay_internal_state(type, upto.first(t - 1), inst.initial_estimates[0][k]);
        const auto& prev = inst.initial_estimates[0][k];
        Rng rng(derive_seed(7, {std::uint64_t(rep), t, k}));
        auto post = ParameterPosterior::uniform(foraging::foraging_bounds());

        auto t0 = Clock::now();
        volatile double sink = aga_update(type, upto, acts[t - 1], prev)[0];
        total[0] += seconds_since(t0);
        t0 = Clock::now();
        sink = abu_update(post, type, upto, acts[t - 1], prev, rng).estimate[0];
        total[1] += seconds_since(t0);
        EgoOptions e10, e20;
        e10.budget = 10;
        e20.budget = 20;
        t0 = Clock::now();
        sink = ego_update(type, upto, acts, rng, e10)[0];
        total[2] += seconds_since(t0);
        t0 = Clock::now();
        sink = ego_update(type, upto, acts, rng, e20)[0];
        total[3] += seconds_since(t0);
        (void)sink;
        ++calls;
      }
    }
  }
  std::array<double, 4> mean{};
  for (int i = 0; i < 4; ++i) mean[i] = total[i] / static_cast<double>(calls);
  o.check(mean[0] <= mean[1], "AGA slower than ABU");
  o.check(mean[1] < mean[2], "ABU not faster than EGO-10");
  o.check(mean[3] > mean[2], "EGO-20 not slower than EGO-10");
  char buf[240];
  std::snprintf(buf, sizeof buf, "%smean ms per update over %zu calls: AGA %.3f, ABU %.3f, EGO-10 %.3f, EGO-20 %.3f",
                o.pass ? "" : " | ", calls, 1e3 * mean[0], 1e3 * mean[1], 1e3 * mean[2], 1e3 * mean[3]);
  o.detail << buf;
  return o;
}

// ---------------------------------------------------------------------------
// 6. Large preset smoke run

Outcome criterion_large_preset() {
  Outcome o;
  harness::ExperimentConfig cfg;
  cfg.world = "15x15";
  cfg.estimator = Estimator::kAbu;
  cfg.selection = SelectionPolicy::kUcb1;
  cfg.instances = 5;
  cfg.seed = 1;
  auto t0 = Clock::now();
  try {
    auto res = harness::run_batch(cfg);
    bool replay_ok = true;
    for (const auto& ep : res.episodes) replay_ok &= foraging::replay_trajectory(ep.trajectory).consistent;
    o.check(res.episodes.size() == 5, "fewer than 5 episodes");
    o.check(replay_ok, "trajectory replay inconsistent");
    char buf[200];
    std::snprintf(buf, sizeof buf, "%s5 instances, completion %.2f, mean steps %.1f (%.0f s)", o.pass ? "" : " | ",
                  res.summary.completion_rate, res.summary.steps_mean_completed, seconds_since(t0));
    o.detail << buf;
  } catch (const std::exception& e) {
    o.check(false, std::string("error: ") + e.what());
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::stoi(argv[i]));
  auto want = [&](int c) { return wanted.empty() || wanted.count(c) > 0; };

  Batches batches;
  const std::vector<std::pair<int, std::pair<std::string, std::function<Outcome()>>>> criteria{
      {1, {"property suite", [] { return criterion_properties(); }}},
      {2, {"completion rates, 10x10, 50 instances", [&] { return criterion_completion(batches); }}},
      {3, {"ABU parameter error falls below step 0", [&] { return criterion_abu_error(batches); }}},
      {4, {"final belief on the true type", [&] { return criterion_belief(batches); }}},
      {5, {"per-update cost ordering", [] { return criterion_timing(); }}},
      {6, {"15x15 preset runs end to end", [] { return criterion_large_preset(); }}},
  };

  int failures = 0;
  for (const auto& [id, c] : criteria) {
    if (!want(id)) continue;
    auto out = c.second();
    std::cout << (out.pass ? "PASS" : "FAIL") << "  criterion " << id << " (" << c.first << "): " << out.detail.str()
              << std::endl;
    failures += !out.pass;
  }
  return failures == 0 ? 0 : 1;
}
