#pragma once

// Batch experiments over a shared, seeded instance sequence, plus the
// aggregate metrics and CSV/JSON outputs.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "partype/harness/episode.hpp"

namespace partype::harness {

inline std::uint64_t instance_seed(std::uint64_t base, std::size_t index) {
  return derive_seed(base, {0x696e7374, index});
}

inline foraging::ForagingInstance make_instance(const ExperimentConfig& cfg, std::size_t index) {
  return foraging::generate_instance(cfg.preset(), instance_seed(cfg.seed, index));
}

struct BatchSummary {
  std::string label;
  std::size_t instances = 0;
  std::size_t completed = 0;
  double completion_rate = 0.0;
  double steps_mean_completed = 0.0;
  double steps_std_completed = 0.0;
  // Means over (episode, other agent) pairs that reached the step.
  std::vector<std::array<double, 3>> error_by_step;
  std::vector<double> belief_by_step;
  std::vector<std::size_t> samples_by_step;
  // Aligned from the end of each episode: index 0 is the final step.
  std::vector<std::array<double, 3>> error_from_end;
  std::vector<double> belief_from_end;
  std::array<double, 3> error_final{};
  double belief_final = 0.0;
  std::size_t updates = 0;
  double mean_update_seconds = 0.0;
};

struct BatchResult {
  ExperimentConfig config;
  std::vector<EpisodeRecord> episodes;  // sorted by instance index
  BatchSummary summary;
};

inline BatchSummary summarise(const std::vector<EpisodeRecord>& episodes, const std::string& label) {
  BatchSummary s;
  s.label = label;
  s.instances = episodes.size();
  std::vector<double> steps;
  double secs = 0.0;
  std::vector<std::array<double, 3>> err_sum, err_end_sum;
  std::vector<double> bel_sum, bel_end_sum;
  std::vector<std::size_t> n_step, n_end;
  std::size_t n_final = 0;

  for (const auto& ep : episodes) {
    if (ep.completed) {
      ++s.completed;
      steps.push_back(ep.steps);
    }
    secs += ep.update_seconds_total;
    s.updates += ep.updates_total;
    const int last = ep.per_step.empty() ? 0 : ep.per_step.back().step;
    for (const auto& r : ep.per_step) {
      const auto t = static_cast<std::size_t>(r.step);
      const auto back = static_cast<std::size_t>(last - r.step);
      if (err_sum.size() <= t) {
        err_sum.resize(t + 1, {0, 0, 0});
        bel_sum.resize(t + 1, 0.0);
        n_step.resize(t + 1, 0);
      }
      if (err_end_sum.size() <= back) {
        err_end_sum.resize(back + 1, {0, 0, 0});
        bel_end_sum.resize(back + 1, 0.0);
        n_end.resize(back + 1, 0);
      }
      for (int p = 0; p < 3; ++p) {
        err_sum[t][p] += r.error[p];
        err_end_sum[back][p] += r.error[p];
      }
      bel_sum[t] += r.belief_true_type;
      bel_end_sum[back] += r.belief_true_type;
      ++n_step[t];
      ++n_end[back];
      if (back == 0) {
        for (int p = 0; p < 3; ++p) s.error_final[p] += r.error[p];
        s.belief_final += r.belief_true_type;
        ++n_final;
      }
    }
  }
  s.completion_rate = s.instances ? double(s.completed) / double(s.instances) : 0.0;
  if (!steps.empty()) {
    double m = 0.0;
    for (double v : steps) m += v;
    m /= double(steps.size());
    double var = 0.0;
    for (double v : steps) var += (v - m) * (v - m);
    s.steps_mean_completed = m;
    s.steps_std_completed = std::sqrt(var / double(steps.size()));
  }
  for (std::size_t t = 0; t < err_sum.size(); ++t) {
    std::array<double, 3> e{};
    for (int p = 0; p < 3; ++p) e[p] = n_step[t] ? err_sum[t][p] / double(n_step[t]) : 0.0;
    s.error_by_step.push_back(e);
    s.belief_by_step.push_back(n_step[t] ? bel_sum[t] / double(n_step[t]) : 0.0);
    s.samples_by_step.push_back(n_step[t]);
  }
  for (std::size_t b = 0; b < err_end_sum.size(); ++b) {
    std::array<double, 3> e{};
    for (int p = 0; p < 3; ++p) e[p] = n_end[b] ? err_end_sum[b][p] / double(n_end[b]) : 0.0;
    s.error_from_end.push_back(e);
    s.belief_from_end.push_back(n_end[b] ? bel_end_sum[b] / double(n_end[b]) : 0.0);
  }
  if (n_final) {
    for (auto& e : s.error_final) e /= double(n_final);
    s.belief_final /= double(n_final);
  }
  s.mean_update_seconds = s.updates ? secs / double(s.updates) : 0.0;
  return s;
}

// Timing lives under "timing" so the rest of the summary is reproducible.
inline nlohmann::json to_json(const BatchSummary& s) {
  nlohmann::json err = nlohmann::json::array(), err_end = nlohmann::json::array();
  for (const auto& e : s.error_by_step) err.push_back(e);
  for (const auto& e : s.error_from_end) err_end.push_back(e);
  return {{"label", s.label},
          {"instances", s.instances},
          {"completed", s.completed},
          {"completion_rate", s.completion_rate},
          {"steps_mean_completed", s.steps_mean_completed},
          {"steps_std_completed", s.steps_std_completed},
          {"error_by_step", err},
          {"belief_by_step", s.belief_by_step},
          {"samples_by_step", s.samples_by_step},
          {"error_from_end", err_end},
          {"belief_from_end", s.belief_from_end},
          {"error_final", s.error_final},
          {"belief_final", s.belief_final},
          {"updates", s.updates},
          {"timing", {{"mean_update_seconds", s.mean_update_seconds}}}};
}

template <class Progress>
BatchResult run_batch(const ExperimentConfig& cfg, Progress&& progress) {
  if (cfg.instances < 1) throw std::invalid_argument("batch needs at least one instance");
  BatchResult res;
  res.config = cfg;
  res.episodes.resize(cfg.instances);
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= cfg.instances) return;
      try {
        const std::size_t index = cfg.first_instance + i;
        auto rec = run_episode(make_instance(cfg, index), cfg);
        rec.instance = index;
        std::lock_guard lock(mu);
        res.episodes[i] = std::move(rec);
        progress(res.episodes[i]);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next = cfg.instances;
        return;
      }
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min(cfg.threads, cfg.instances));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < n_threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  res.summary = summarise(res.episodes, cfg.describe());
  return res;
}

inline BatchResult run_batch(const ExperimentConfig& cfg) {
  return run_batch(cfg, [](const EpisodeRecord&) {});
}

inline std::string join_indices(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(v[i]);
  }
  return s;
}

inline void write_per_step_csv(std::ostream& os, const std::vector<EpisodeRecord>& episodes) {
  os << "instance,step,agent,belief_true_type,err_p1,err_p2,err_p3,selected_type,update_seconds\n";
  os << std::setprecision(10);
  for (const auto& ep : episodes)
    for (const auto& r : ep.per_step)
      os << ep.instance << ',' << r.step << ',' << r.agent << ',' << r.belief_true_type << ',' << r.error[0] << ','
         << r.error[1] << ',' << r.error[2] << ',' << join_indices(r.selected) << ',' << r.update_seconds << '\n';
}

inline void write_episodes_csv(std::ostream& os, const std::vector<EpisodeRecord>& episodes) {
  os << "instance,completed,steps\n";
  for (const auto& ep : episodes) os << ep.instance << ',' << (ep.completed ? 1 : 0) << ',' << ep.steps << '\n';
}

// Writes summary.json, per_step.csv, episodes.csv (and traces/ if enabled) into dir.
inline void write_outputs(const BatchResult& res, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    nlohmann::json j = to_json(res.summary);
    j["config"] = to_json(res.config);
    std::ofstream(dir / "summary.json") << j.dump(2) << '\n';
  }
  {
    std::ofstream os(dir / "per_step.csv");
    write_per_step_csv(os, res.episodes);
  }
  {
    std::ofstream os(dir / "episodes.csv");
    write_episodes_csv(os, res.episodes);
  }
  if (res.config.write_traces) {
    std::filesystem::create_directories(dir / "traces");
    for (const auto& ep : res.episodes) {
      std::ofstream os(dir / "traces" / ("instance_" + std::to_string(ep.instance) + ".json"));
      os << foraging::to_json(ep.trajectory).dump() << '\n';
    }
  }
}

}  // namespace partype::harness
