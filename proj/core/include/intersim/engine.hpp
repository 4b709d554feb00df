#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "intersim/arrivals.hpp"
#include "intersim/geometry.hpp"
#include "intersim/metrics.hpp"
#include "intersim/policy.hpp"
#include "intersim/vehicle.hpp"

namespace intersim {

enum class PolicyKind { Light, V2V };

// Full experiment input. Equal configs (seed included) produce
// bit-identical results.
struct ScenarioConfig {
  IntersectionGeometry geometry;
  VehicleParams vehicle;
  // Mean inter-arrival T per direction, seconds; +infinity disables a
  // direction. Directions 1 and 3 are north-south, 2 and 4 east-west.
  std::array<double, 4> mean_interarrival{3.0, 3.0, 3.0, 3.0};
  PolicyKind policy = PolicyKind::Light;
  LightSchedule light;
  double v2v_margin = 0.1;  // s, widening applied to candidate bookings
  std::uint64_t seed = 0;
  double spawn_window = 1800.0;  // s of arrivals
  double drain_cap = 7200.0;     // s; hard stop if the road never empties
  double dt = 0.1;               // s; fixed, other values rejected
  bool strict = true;            // abort on invariant violations

  void validate() const;  // throws std::invalid_argument
};

enum class EventKind { Scheduled, Spawned, Committed, Cleared, Despawned, DecisionChanged };

const char* to_string(EventKind k);

struct Event {
  double time = 0.0;
  int vehicle_id = 0;
  EventKind kind = EventKind::Scheduled;
  std::string detail;
};

struct Violation {
  double time = 0.0;
  std::string what;
};

// Thrown in strict mode when a safety invariant breaks mid-run.
class SafetyViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimResult {
  std::vector<DelayRecord> records;  // sorted by vehicle id
  std::vector<Event> events;         // append order
  std::vector<Violation> violations; // empty on a clean run
  int scheduled = 0;
  int spawned = 0;
  int despawned = 0;
  bool drained = false;  // false if the drain cap cut the run short
  double end_time = 0.0;
};

// The deterministic tick loop. Each tick runs a fixed phase order:
// snapshot, decide, actuate, integrate, commit, despawn, spawn, advance.
// One instance is strictly single-threaded; distinct instances share
// nothing and may run in parallel.
class Simulation {
 public:
  explicit Simulation(ScenarioConfig cfg);

  // Warm start with vehicles already on the road. They must satisfy the
  // road invariants; the first tick's checks will catch them otherwise.
  Simulation(ScenarioConfig cfg, const std::vector<VehicleState>& initial);

  void tick();
  bool finished() const;

  // Consumes the simulation: flags drainage, stamps the end time and
  // hands the accumulated result over.
  SimResult finish();

  double now() const { return static_cast<double>(tick_index_) * cfg_.dt; }
  const ScenarioConfig& config() const { return cfg_; }
  const std::deque<VehicleState>& lane(Direction d) const { return lanes_[slot_of(d)]; }
  int on_road() const { return on_road_; }
  std::size_t queued() const { return queue_.total(); }
  const std::vector<Violation>& violations() const { return result_.violations; }

  std::vector<VehicleSnapshot> snapshot() const;

 private:
  void schedule_arrivals();
  void spawn_at(double t);
  std::unordered_map<int, Decision> decide(const std::vector<VehicleSnapshot>& world, double t);
  void record_decision_flips(const std::unordered_map<int, Decision>& decisions, double t);
  void actuate_and_integrate(const std::unordered_map<int, Decision>& decisions, double t);
  void commit_and_clear(double t, double t_next);
  void despawn(double t, double t_next);
  void check_invariants(double t_next);
  void report_violation(double t, const std::string& what);

  ScenarioConfig cfg_;
  std::int64_t tick_index_ = 0;
  std::array<std::deque<VehicleState>, 4> lanes_;  // index 0 = rearmost
  SpawnQueue queue_;
  SimResult result_;
  std::unordered_map<int, Decision> last_decision_;
  std::unordered_map<int, double> last_accel_;
  std::unordered_map<int, double> end_crossing_time_;
  int on_road_ = 0;
  int injected_ = 0;  // warm-start vehicles, outside the arrival bookkeeping
  bool drain_capped_ = false;
};

// Runs a scenario to completion.
SimResult run(const ScenarioConfig& cfg);

// Same, starting from a warm state.
SimResult run_with_initial(const ScenarioConfig& cfg,
                           const std::vector<VehicleState>& initial);

}  // namespace intersim
