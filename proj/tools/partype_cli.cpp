// Command-line front end: batch experiments and trajectory replay.

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "partype/foraging/serialization.hpp"
#include "partype/harness/batch.hpp"

namespace {

using partype::harness::ExperimentConfig;

int run_command(const std::string& config_path, const std::string& out_dir, const std::optional<std::uint64_t>& seed,
                const std::optional<std::size_t>& instances, const std::optional<std::string>& estimator,
                const std::optional<std::string>& selection, const std::optional<std::string>& world,
                const std::optional<int>& rollouts, const std::optional<std::size_t>& ego_budget,
                const std::optional<std::size_t>& threads, bool traces, bool quiet) {
  ExperimentConfig cfg;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open config " + config_path);
    cfg = partype::harness::config_from_json(nlohmann::json::parse(in));
  }
  if (seed) cfg.seed = *seed;
  if (instances) cfg.instances = *instances;
  if (estimator) partype::harness::set_estimator(cfg, *estimator);
  if (selection) cfg.selection = partype::parse_selection(*selection);
  if (world) cfg.world = *world;
  if (rollouts) cfg.rollouts = *rollouts;
  if (ego_budget) cfg.ego_budget = *ego_budget;
  if (threads) cfg.threads = *threads;
  if (traces) cfg.write_traces = true;
  if (!out_dir.empty()) cfg.output = out_dir;
  if (cfg.ego_budget < 2) throw std::invalid_argument("--ego-budget must be at least 2");
  if (cfg.instances < 1) throw std::invalid_argument("--instances must be at least 1");

  std::size_t done = 0;
  auto res = partype::harness::run_batch(cfg, [&](const partype::harness::EpisodeRecord& ep) {
    ++done;
    if (!quiet)
      std::cerr << "[" << done << "/" << cfg.instances << "] instance " << ep.instance
                << (ep.completed ? " completed" : " not completed") << " in " << ep.steps << " steps\n";
  });
  partype::harness::write_outputs(res, cfg.output);
  const auto& s = res.summary;
  std::cout << s.label << ": completion " << s.completed << "/" << s.instances << " (" << 100.0 * s.completion_rate
            << "%), mean steps (completed) " << s.steps_mean_completed << ", final belief on true type "
            << s.belief_final << ", mean seconds per update " << s.mean_update_seconds << "\n"
            << "wrote " << cfg.output << "/summary.json, per_step.csv, episodes.csv\n";
  return 0;
}

int replay_command(const std::string& trace_path, bool verbose) {
  std::ifstream in(trace_path);
  if (!in) throw std::runtime_error("cannot open trace " + trace_path);
  auto tr = partype::foraging::trajectory_from_json(nlohmann::json::parse(in));
  auto state = tr.instance.world;
  int total = 0;
  bool consistent = true;
  for (const auto& st : tr.steps) {
    auto out = partype::foraging::step_world(state, st.actions, st.order_seed);
    total += out.reward;
    consistent = consistent && out.reward == st.reward;
    state = std::move(out.state);
    if (verbose) {
      std::cout << "step " << st.step << ":";
      for (auto a : st.actions) std::cout << ' ' << partype::foraging::to_string(a);
      std::cout << "  reward " << out.reward << "  remaining " << state.remaining_items() << "\n";
    }
  }
  std::cout << "replayed " << tr.steps.size() << " steps, items collected " << total << "/" << state.items.size()
            << (state.all_collected() ? " (completed)" : "") << (consistent ? "" : ", REWARD MISMATCH") << "\n";
  return consistent ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Type beliefs with parameter estimation in level-based foraging"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a batch experiment");
  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> instances, ego_budget, threads;
  std::optional<std::string> estimator, selection, world;
  std::optional<int> rollouts;
  bool traces = false, quiet = false;
  run->add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", seed, "Base seed");
  run->add_option("--instances", instances, "Number of instances");
  run->add_option("--estimator", estimator, "aga | abu | ego | none | rnd | cor");
  run->add_option("--selection", selection, "all | posterior | ucb1");
  run->add_option("--world", world, "10x10 | 15x15");
  run->add_option("--rollouts", rollouts, "UCT rollouts per step");
  run->add_option("--ego-budget", ego_budget, "Points evaluated per EGO update");
  run->add_option("--threads", threads, "Worker threads (episodes run in parallel)");
  run->add_flag("--traces", traces, "Write per-episode trajectory JSON");
  run->add_flag("--quiet", quiet, "No per-episode progress");

  auto* replay = app.add_subcommand("replay", "Re-simulate a recorded trajectory");
  std::string trace_path;
  bool verbose = false;
  replay->add_option("--trace", trace_path, "Trajectory JSON")->required()->check(CLI::ExistingFile);
  replay->add_flag("-v,--verbose", verbose, "Print every step");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run)
      return run_command(config_path, out_dir, seed, instances, estimator, selection, world, rollouts, ego_budget,
                         threads, traces, quiet);
    if (*replay) return replay_command(trace_path, verbose);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
