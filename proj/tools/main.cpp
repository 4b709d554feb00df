// Command-line front end: single runs, the even/uneven experiment suites
// and strict invariant checks.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "intersim/scenario.hpp"
#include "intersim/suite.hpp"

namespace {

intersim::ScenarioConfig load_base(const std::string& config_path) {
  if (config_path.empty()) return intersim::ScenarioConfig{};
  return intersim::load_scenario_file(config_path);
}

void apply_overrides(intersim::ScenarioConfig& cfg,
                     const std::optional<std::uint64_t>& seed,
                     const std::string& policy,
                     const std::optional<bool>& strict) {
  if (seed) cfg.seed = *seed;
  if (policy == "light") cfg.policy = intersim::PolicyKind::Light;
  else if (policy == "v2v") cfg.policy = intersim::PolicyKind::V2V;
  else if (!policy.empty()) throw intersim::ConfigError("unknown policy '" + policy + "'");
  if (strict) cfg.strict = *strict;
}

void print_summary(const std::vector<intersim::RunSummaryRow>& rows) {
  std::printf("%-8s %8s %10s %10s %10s %12s\n", "scope", "count", "median",
              "mean", "max", "exceed>20s");
  for (const auto& r : rows) {
    std::printf("%-8s %8zu %10.2f %10.2f %10.2f %12.3f\n", r.scope.c_str(),
                r.count, r.median, r.mean, r.max, r.exceed_gt20);
  }
}

std::vector<std::uint64_t> parse_seed_list(const std::string& csv) {
  std::vector<std::uint64_t> seeds;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const auto comma = csv.find(',', start);
    const std::string token =
        csv.substr(start, comma == std::string::npos ? csv.size() - start
                                                     : comma - start);
    if (!token.empty()) seeds.push_back(std::stoull(token));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (seeds.empty()) throw intersim::ConfigError("empty seed list");
  return seeds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"intersim: four-way intersection simulator comparing fixed-cycle "
               "traffic-light control with cooperative V2V passing"};
  app.require_subcommand(1);

  std::string config_path;
  std::string policy;
  std::string out_dir = "out";
  std::string seeds_csv = "1,2,3,4,5";
  std::string suite_name = "even";
  std::optional<std::uint64_t> seed;
  std::optional<bool> strict;
  bool with_events = false;
  int jobs = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "scenario file (defaults apply when omitted)");
    cmd->add_option("--seed", seed, "override the scenario seed");
    cmd->add_option("--policy", policy, "override the policy: light or v2v");
    cmd->add_flag("--strict,!--no-strict", strict,
                  "abort on any safety-invariant violation (default on)");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "run one scenario and write CSV outputs");
  add_common(run_cmd);
  run_cmd->add_option("--out", out_dir, "output directory");
  run_cmd->add_flag("--events", with_events, "also write the event log (events.csv)");

  CLI::App* suite_cmd = app.add_subcommand("suite", "run a named experiment suite");
  add_common(suite_cmd);
  suite_cmd->add_option("--name", suite_name, "even, uneven or custom")
      ->check(CLI::IsMember({"even", "uneven", "custom"}));
  suite_cmd->add_option("--seeds", seeds_csv, "comma-separated seed list");
  suite_cmd->add_option("--out", out_dir, "output directory");
  suite_cmd->add_option("--jobs", jobs, "worker threads (0 = all cores)");

  CLI::App* check_cmd = app.add_subcommand(
      "check", "strict invariant-only run; no files, nonzero exit on violation");
  add_common(check_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      intersim::ScenarioConfig cfg = load_base(config_path);
      apply_overrides(cfg, seed, policy, strict);
      const auto out = intersim::run_to_directory(cfg, out_dir, with_events);
      std::printf("wrote %s (policy=%s seed=%llu drained=%s)\n",
                  out.directory.string().c_str(), intersim::to_string(out.policy),
                  static_cast<unsigned long long>(out.seed),
                  out.drained ? "true" : "false");
      print_summary(out.summary);
      return out.drained ? 0 : 2;
    }

    if (suite_cmd->parsed()) {
      intersim::ScenarioConfig base = load_base(config_path);
      apply_overrides(base, seed, policy, strict);
      const auto seeds = parse_seed_list(seeds_csv);
      intersim::ExperimentSuite suite;
      if (suite_name == "even") suite = intersim::make_even_suite(base, seeds);
      else if (suite_name == "uneven") suite = intersim::make_uneven_suite(base, seeds);
      else suite = intersim::ExperimentSuite{"custom", {{"base", base}}, seeds};
      const auto outputs = intersim::run_suite(suite, out_dir, jobs);
      bool all_drained = true;
      for (const auto& out : outputs) all_drained = all_drained && out.drained;
      std::printf("suite '%s': %zu runs under %s\n", suite.name.c_str(),
                  outputs.size(), out_dir.c_str());
      return all_drained ? 0 : 2;
    }

    // check
    intersim::ScenarioConfig cfg = load_base(config_path);
    apply_overrides(cfg, seed, policy, strict);
    cfg.strict = strict.value_or(true);
    const auto result = intersim::run(cfg);
    std::printf("ok: %d vehicles, %zu violations, drained=%s\n", result.spawned,
                result.violations.size(), result.drained ? "true" : "false");
    return result.violations.empty() && result.drained ? 0 : 1;
  } catch (const intersim::SafetyViolation& e) {
    std::fprintf(stderr, "safety violation: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
