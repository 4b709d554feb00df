#include "intersim/suite.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include "intersim/scenario.hpp"

namespace intersim {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

ScenarioConfig with_demand(ScenarioConfig cfg, double t_ns, double t_ew) {
  cfg.mean_interarrival = {t_ns, t_ew, t_ns, t_ew};
  return cfg;
}

}  // namespace

const char* to_string(PolicyKind p) {
  return p == PolicyKind::Light ? "light" : "v2v";
}

ExperimentSuite make_even_suite(const ScenarioConfig& base,
                                std::vector<std::uint64_t> seeds) {
  ExperimentSuite suite{"even", {}, std::move(seeds)};
  for (double t : {3.0, 4.0, 10.0}) {
    suite.points.push_back({"T" + std::to_string(static_cast<int>(t)),
                            with_demand(base, t, t)});
  }
  return suite;
}

ExperimentSuite make_uneven_suite(const ScenarioConfig& base,
                                  std::vector<std::uint64_t> seeds) {
  ExperimentSuite suite{"uneven", {}, std::move(seeds)};
  for (double t : {3.0, 4.0, 6.0, 10.0}) {
    suite.points.push_back({"T2_" + std::to_string(static_cast<int>(t)),
                            with_demand(base, 3.0, t)});
  }
  return suite;
}

std::string delays_csv(const std::vector<DelayRecord>& records) {
  std::string out = "id,direction,scheduled_spawn,exit_time,delay\n";
  for (const DelayRecord& r : records) {
    out += std::to_string(r.vehicle_id) + "," + std::to_string(index_of(r.direction)) +
           "," + num(r.scheduled_spawn) + "," + num(r.exit_time) + "," + num(r.delay) +
           "\n";
  }
  return out;
}

std::string cdf_csv(const std::vector<DelayRecord>& records) {
  EmpiricalCDF cdf(delays_of(records));
  std::string out = "delay,cdf\n";
  const auto n = static_cast<double>(cdf.size());
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    out += num(cdf.sorted()[i]) + "," + num(static_cast<double>(i + 1) / n) + "\n";
  }
  return out;
}

std::string summary_csv(const std::vector<RunSummaryRow>& rows, bool drained) {
  std::string out = "scope,count,median,mean,max,exceed_gt_20s,drained\n";
  for (const RunSummaryRow& r : rows) {
    out += r.scope + "," + std::to_string(r.count) + "," + num(r.median) + "," +
           num(r.mean) + "," + num(r.max) + "," + num(r.exceed_gt20) + "," +
           (drained ? "true" : "false") + "\n";
  }
  return out;
}

std::string events_csv(const std::vector<Event>& events) {
  std::string out = "time,vehicle_id,event,detail\n";
  for (const Event& e : events) {
    out += num(e.time) + "," + std::to_string(e.vehicle_id) + "," +
           to_string(e.kind) + "," + e.detail + "\n";
  }
  return out;
}

namespace {

RunSummaryRow summarize_scope(std::string scope, const std::vector<double>& delays) {
  RunSummaryRow row;
  row.scope = std::move(scope);
  row.count = delays.size();
  if (delays.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.median = row.mean = row.max = row.exceed_gt20 = nan;
    return row;
  }
  EmpiricalCDF cdf(delays);
  row.median = cdf.quantile(0.5);
  double sum = 0.0;
  for (double d : delays) sum += d;
  row.mean = sum / static_cast<double>(delays.size());
  row.max = cdf.sorted().back();
  row.exceed_gt20 = exceedance_fraction(delays, 20.0);
  return row;
}

}  // namespace

std::vector<RunSummaryRow> summarize(const std::vector<DelayRecord>& records) {
  std::vector<RunSummaryRow> rows;
  rows.push_back(summarize_scope("pooled", delays_of(records)));
  for (Direction d : kAllDirections) {
    rows.push_back(summarize_scope("d" + std::to_string(index_of(d)),
                                   delays_of(records, d)));
  }
  return rows;
}

RunOutput run_to_directory(const ScenarioConfig& cfg,
                           const std::filesystem::path& dir, bool write_events) {
  std::filesystem::create_directories(dir);
  SimResult result = run(cfg);

  RunOutput out;
  out.policy = cfg.policy;
  out.seed = cfg.seed;
  out.directory = dir;
  out.drained = result.drained;
  out.summary = summarize(result.records);

  write_file(dir / "manifest.cfg", serialize_scenario(cfg));
  write_file(dir / "delays.csv", delays_csv(result.records));
  write_file(dir / "cdf.csv", cdf_csv(result.records));
  write_file(dir / "summary.csv", summary_csv(out.summary, result.drained));
  if (write_events) {
    write_file(dir / "events.csv", events_csv(result.events));
  }

  out.records = std::move(result.records);
  return out;
}

std::vector<RunOutput> run_suite(const ExperimentSuite& suite,
                                 const std::filesystem::path& out_dir, int jobs) {
  struct Job {
    const GridPoint* point;
    PolicyKind policy;
    std::uint64_t seed;
  };
  std::vector<Job> todo;
  for (const GridPoint& point : suite.points) {
    for (PolicyKind policy : {PolicyKind::Light, PolicyKind::V2V}) {
      for (std::uint64_t seed : suite.seeds) {
        todo.push_back({&point, policy, seed});
      }
    }
  }

  std::vector<RunOutput> outputs(todo.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  const unsigned hw = std::thread::hardware_concurrency();
  const unsigned workers =
      jobs > 0 ? static_cast<unsigned>(jobs) : std::max(hw, 1u);

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= todo.size()) return;
      const Job& job = todo[i];
      try {
        ScenarioConfig cfg = job.point->config;
        cfg.policy = job.policy;
        cfg.seed = job.seed;
        const auto dir = out_dir / suite.name / job.point->label /
                         to_string(job.policy) / ("seed" + std::to_string(job.seed));
        RunOutput out = run_to_directory(cfg, dir);
        out.suite = suite.name;
        out.grid_label = job.point->label;
        outputs[i] = std::move(out);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  for (unsigned w = 0; w < std::min<std::size_t>(workers, todo.size()); ++w) {
    pool.emplace_back(worker);
  }
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  // One collector writes the aggregate after all workers are done.
  std::string agg = "suite,grid,policy,seed,scope,count,median,mean,max,exceed_gt_20s,drained\n";
  for (const RunOutput& out : outputs) {
    for (const RunSummaryRow& row : out.summary) {
      agg += out.suite + "," + out.grid_label + "," + to_string(out.policy) + "," +
             std::to_string(out.seed) + "," + row.scope + "," +
             std::to_string(row.count) + "," + num(row.median) + "," + num(row.mean) +
             "," + num(row.max) + "," + num(row.exceed_gt20) + "," +
             (out.drained ? "true" : "false") + "\n";
    }
  }
  std::filesystem::create_directories(out_dir / suite.name);
  write_file(out_dir / suite.name / "suite_summary.csv", agg);

  return outputs;
}

}  // namespace intersim
