#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <ostream>
#include <sstream>

#include "ethrisk/config.hpp"
#include "ethrisk/errors.hpp"
#include "ethrisk/metrics.hpp"
#include "ethrisk/runner.hpp"
#include "ethrisk/scenario.hpp"

namespace ethrisk::cli {
namespace fs = std::filesystem;
namespace {

constexpr const char* kConfigEnv = "ETHRISK_CONFIG";

struct RunOptions {
  std::string config;
  std::string mode;
  std::optional<double> cost_limit;
};

// --config wins over the environment, which wins over built-in defaults.
RunConfig resolve_config(const RunOptions& opts) {
  RunConfig cfg;
  if (!opts.config.empty()) {
    cfg = load_run_config(opts.config);
  } else if (const char* env = std::getenv(kConfigEnv); env != nullptr && *env != '\0') {
    cfg = load_run_config(env);
  }
  if (!opts.mode.empty()) cfg.mode = run_mode_from_string(opts.mode);
  if (opts.cost_limit) cfg.lagrange.cost_limit = *opts.cost_limit;
  return cfg;
}

std::string log_stem(const EpisodeLog& log) {
  return log.scenario + "__" + log.policy + "__" + std::string(to_string(log.mode)) + "__seed" +
         std::to_string(log.seed);
}

void write_text(const fs::path& file, const std::string& content) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + file.string());
  out << content;
  if (!out) throw IoError("failed writing " + file.string());
}

std::string read_text(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open " + file.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

std::vector<fs::path> json_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

struct Job {
  const Scenario* scenario;
  std::string policy;
  std::uint64_t seed;
};

EpisodeLog run_job(const Job& job, const RunConfig& cfg, ReplayBuffer* replay) {
  const auto policy = make_policy(job.policy, *job.scenario, job.seed, cfg);
  return run_episode(*job.scenario, *policy, cfg, job.seed, replay);
}

int cmd_run(const std::string& scenario_file, const std::string& policy_name,
            const RunOptions& opts, std::uint64_t seed, const fs::path& out_dir,
            std::ostream& out) {
  const Scenario sc = load_scenario(scenario_file);
  const RunConfig cfg = resolve_config(opts);
  std::optional<ReplayBuffer> replay;
  if (cfg.replay_enabled) replay.emplace(cfg.replay);
  const EpisodeLog log =
      run_job(Job{&sc, policy_name, seed}, cfg, replay ? &*replay : nullptr);

  make_dir(out_dir);
  const fs::path file = out_dir / (log_stem(log) + ".json");
  write_text(file, log_to_json(log));
  if (replay) {
    std::ofstream snap(out_dir / (log_stem(log) + ".erpb"), std::ios::binary | std::ios::trunc);
    if (!snap) throw IoError("cannot write replay snapshot");
    replay->save(snap);
  }
  out << log.scenario << " " << log.policy << " " << to_string(log.mode) << " seed " << seed
      << ": " << to_string(log.terminal) << " after " << log.records.size()
      << " steps, return " << log.episode_return << ", cost " << log.episode_cost
      << ", lambda " << log.lagrange_after.lambda << "\n"
      << "log written to " << file.string() << "\n";
  return kExitOk;
}

int cmd_batch(const fs::path& scenario_dir, std::uint64_t seeds, std::uint64_t first_seed,
              std::vector<std::string> policies, const RunOptions& opts, const fs::path& out_dir,
              const std::string& format, unsigned jobs, std::ostream& out) {
  const RunConfig cfg = resolve_config(opts);
  std::vector<Scenario> scenarios;
  for (const fs::path& file : json_files(scenario_dir)) scenarios.push_back(load_scenario(file));
  if (scenarios.empty()) throw ValidationError("no scenario files in " + scenario_dir.string());
  if (policies.empty()) policies = {"all"};

  std::vector<Job> queue;
  for (const Scenario& sc : scenarios) {
    std::vector<std::string> names;
    for (const std::string& p : policies) {
      if (p == "all") {
        names.push_back("lane_keep");
        for (const auto& [name, actions] : sc.policies) names.push_back(name);
      } else if (p == "lane_keep" || p == "random" || sc.policies.contains(p)) {
        names.push_back(p);
      }
    }
    for (const std::string& name : names) {
      for (std::uint64_t s = 0; s < seeds; ++s) queue.push_back({&sc, name, first_seed + s});
    }
  }
  if (queue.empty()) throw ValidationError("no scenario defines the requested policies");

  // Episodes are independent; results are collected in queue order.
  std::vector<EpisodeLog> logs(queue.size());
  const std::size_t width = std::max(1u, jobs);
  for (std::size_t begin = 0; begin < queue.size(); begin += width) {
    const std::size_t end = std::min(queue.size(), begin + width);
    std::vector<std::future<EpisodeLog>> running;
    for (std::size_t i = begin; i < end; ++i) {
      running.push_back(std::async(std::launch::async,
                                   [&cfg, job = queue[i]] { return run_job(job, cfg, nullptr); }));
    }
    for (std::size_t i = begin; i < end; ++i) logs[i] = running[i - begin].get();
  }

  const fs::path log_dir = out_dir / "logs";
  make_dir(log_dir);
  for (const EpisodeLog& log : logs) write_text(log_dir / (log_stem(log) + ".json"), log_to_json(log));
  const fs::path metrics_dir = out_dir / "metrics";
  std::vector<MetricsFormat> formats;
  if (format == "both") {
    formats = {MetricsFormat::kCsv, MetricsFormat::kJson};
  } else {
    formats = {metrics_format_from_string(format)};
  }
  for (MetricsFormat f : formats) emit_metrics(logs, f, metrics_dir);
  out << "ran " << logs.size() << " episodes from " << scenarios.size() << " scenarios; logs in "
      << log_dir.string() << ", metrics in " << metrics_dir.string() << "\n";
  return kExitOk;
}

int cmd_metrics(const fs::path& log_dir, const std::string& format, fs::path out_dir,
                std::ostream& out) {
  const MetricsFormat f = metrics_format_from_string(format);
  std::vector<EpisodeLog> logs;
  for (const fs::path& file : json_files(log_dir)) {
    logs.push_back(log_from_json(read_text(file), file.string()));
  }
  if (out_dir.empty()) out_dir = log_dir / "metrics";
  for (const fs::path& file : emit_metrics(logs, f, out_dir)) out << file.string() << "\n";
  return kExitOk;
}

int cmd_validate(const std::string& scenario_file, std::ostream& out) {
  const Scenario sc = load_scenario(scenario_file);
  out << "ok: " << sc.name << " (" << sc.agents.size() << " agents, path "
      << sc.path->length() << " m, " << sc.duration << " s, policies:";
  for (const auto& [name, actions] : sc.policies) out << " " << name;
  out << ")\n";
  return kExitOk;
}

}  // namespace

int Main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ethical-risk planning simulator", "ethrisk"};
  app.require_subcommand(1);

  RunOptions run_opts;
  std::string scenario_file;
  std::string policy = "lane_keep";
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  double cost_limit = 0.0;

  auto add_run_options = [&](CLI::App* sub) {
    sub->add_option("--mode", run_opts.mode, "ethical, selfish or standard")
        ->check(CLI::IsMember({"ethical", "selfish", "standard"}));
    sub->add_option("--cost-limit", cost_limit, "Cost limit for the multiplier update");
    sub->add_option("--config", run_opts.config,
                    std::string("Run configuration JSON (default: $") + kConfigEnv + ")");
    sub->add_option("--out", out_dir, "Output directory");
  };

  CLI::App* run = app.add_subcommand("run", "Run one episode and write its log");
  run->add_option("--scenario", scenario_file, "Scenario JSON")->required();
  run->add_option("--policy", policy, "lane_keep, random or a scripted policy of the scenario");
  run->add_option("--seed", seed, "Random seed");
  add_run_options(run);

  std::string scenario_dir;
  std::uint64_t seeds = 1;
  std::uint64_t first_seed = 0;
  std::vector<std::string> policies;
  std::string batch_format = "both";
  unsigned jobs = 1;
  CLI::App* batch = app.add_subcommand("batch", "Run every scenario in a directory");
  batch->add_option("--scenario-dir", scenario_dir, "Directory of scenario JSON files")->required();
  batch->add_option("--seeds", seeds, "Seeds per (scenario, policy)");
  batch->add_option("--first-seed", first_seed, "First seed");
  batch->add_option("--policy", policies, "Policies to run (repeatable; 'all' = lane_keep + scripted)");
  batch->add_option("--format", batch_format, "Metrics format: csv, json or both")
      ->check(CLI::IsMember({"csv", "json", "both"}));
  batch->add_option("--jobs", jobs, "Episodes run concurrently");
  add_run_options(batch);

  std::string log_dir;
  std::string metrics_format = "csv";
  std::string metrics_out;
  CLI::App* metrics = app.add_subcommand("metrics", "Summarize a directory of episode logs");
  metrics->add_option("--logs", log_dir, "Directory of episode log JSON files")->required();
  metrics->add_option("--format", metrics_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  metrics->add_option("--out", metrics_out, "Output directory (default: LOGS/metrics)");

  CLI::App* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("--scenario", scenario_file, "Scenario JSON")->required();

  std::vector<std::string> reversed(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  for (CLI::App* sub : {run, batch}) {
    if (sub->parsed() && sub->count("--cost-limit") > 0) run_opts.cost_limit = cost_limit;
  }

  try {
    if (run->parsed()) return cmd_run(scenario_file, policy, run_opts, seed, out_dir, out);
    if (batch->parsed()) {
      return cmd_batch(scenario_dir, seeds, first_seed, policies, run_opts, out_dir, batch_format,
                       jobs, out);
    }
    if (metrics->parsed()) return cmd_metrics(log_dir, metrics_format, metrics_out, out);
    if (validate->parsed()) return cmd_validate(scenario_file, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}

}  // namespace ethrisk::cli
