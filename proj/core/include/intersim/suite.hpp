#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "intersim/engine.hpp"
#include "intersim/metrics.hpp"

namespace intersim {

struct GridPoint {
  std::string label;
  ScenarioConfig config;  // policy and seed get overridden per run
};

// A named grid of scenarios. Every grid point runs under both policies
// with the shared seed list, so comparisons are paired.
struct ExperimentSuite {
  std::string name;
  std::vector<GridPoint> points;
  std::vector<std::uint64_t> seeds;
};

// Equal demand on all four directions, T in {3, 4, 10} s.
ExperimentSuite make_even_suite(const ScenarioConfig& base,
                                std::vector<std::uint64_t> seeds);

// North-south fixed at T = 3 s, east-west swept over {3, 4, 6, 10} s.
ExperimentSuite make_uneven_suite(const ScenarioConfig& base,
                                  std::vector<std::uint64_t> seeds);

// One scope line of summary.csv: pooled or a single direction.
struct RunSummaryRow {
  std::string scope;
  std::size_t count = 0;
  double median = 0.0;
  double mean = 0.0;
  double max = 0.0;
  double exceed_gt20 = 0.0;  // fraction of delays > 20 s
};

struct RunOutput {
  std::string suite;
  std::string grid_label;
  PolicyKind policy = PolicyKind::Light;
  std::uint64_t seed = 0;
  std::filesystem::path directory;
  bool drained = true;
  std::vector<DelayRecord> records;
  std::vector<RunSummaryRow> summary;
};

// CSV renderings; fixed column order and fixed %.6f formatting keep the
// outputs byte-reproducible for equal configs.
std::string delays_csv(const std::vector<DelayRecord>& records);
std::string cdf_csv(const std::vector<DelayRecord>& records);
std::string summary_csv(const std::vector<RunSummaryRow>& rows, bool drained);
std::string events_csv(const std::vector<Event>& events);

std::vector<RunSummaryRow> summarize(const std::vector<DelayRecord>& records);

const char* to_string(PolicyKind p);

// Runs one scenario and writes delays.csv, cdf.csv, summary.csv and
// manifest.cfg (the fully resolved config; rerunning it reproduces the
// directory byte for byte) under `dir`. Optionally also events.csv.
RunOutput run_to_directory(const ScenarioConfig& cfg,
                           const std::filesystem::path& dir,
                           bool write_events = false);

// Fans the suite's (grid x policy x seed) runs over `jobs` worker threads
// (0 = hardware concurrency). Each run owns its own directory
// out_dir/<suite>/<grid>/<policy>/seed<k>/; an aggregate
// suite_summary.csv lands in out_dir/<suite>/ afterwards.
std::vector<RunOutput> run_suite(const ExperimentSuite& suite,
                                 const std::filesystem::path& out_dir,
                                 int jobs = 0);

}  // namespace intersim
