#include "intersim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace intersim {

namespace {

std::string dir_detail(Direction d) { return "dir=" + std::to_string(index_of(d)); }

}  // namespace

void ScenarioConfig::validate() const {
  geometry.validate();
  vehicle.validate();
  light.validate();
  for (Direction d : kAllDirections) {
    const double t = mean_interarrival[slot_of(d)];
    if (std::isnan(t) || !(t > 0.5)) {
      throw std::invalid_argument(
          "t" + std::to_string(index_of(d)) +
          " must exceed 0.5 s (uniform support [T-0.5, T+0.5] must stay positive)");
    }
  }
  if (dt != 0.1) {
    throw std::invalid_argument("dt is fixed at 0.1 s (the decision cadence); other values are rejected");
  }
  if (!std::isfinite(v2v_margin) || v2v_margin < dt) {
    throw std::invalid_argument(
        "v2v margin must be at least one tick (predictions move by up to one "
        "tick between decision rounds; a smaller margin voids the conflict-box "
        "exclusion guarantee)");
  }
  if (!std::isfinite(spawn_window) || !(spawn_window > 0.0)) {
    throw std::invalid_argument("spawn_window must be positive");
  }
  if (!std::isfinite(drain_cap) || drain_cap < spawn_window) {
    throw std::invalid_argument("drain_cap must be >= spawn_window");
  }
}

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::Scheduled: return "scheduled";
    case EventKind::Spawned: return "spawned";
    case EventKind::Committed: return "committed";
    case EventKind::Cleared: return "cleared";
    case EventKind::Despawned: return "despawned";
    case EventKind::DecisionChanged: return "decision-changed";
  }
  return "unknown";
}

Simulation::Simulation(ScenarioConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  schedule_arrivals();
  // Arrivals scheduled at exactly t = 0 enter before the first tick.
  spawn_at(0.0);
}

Simulation::Simulation(ScenarioConfig cfg, const std::vector<VehicleState>& initial)
    : cfg_(std::move(cfg)) {
  cfg_.validate();
  schedule_arrivals();
  for (const VehicleState& v : initial) {
    auto& lane = lanes_[slot_of(v.direction)];
    const auto pos = std::find_if(lane.begin(), lane.end(), [&](const VehicleState& w) {
      return w.front_pos > v.front_pos;
    });
    lane.insert(pos, v);
    ++on_road_;
    ++result_.spawned;
    ++injected_;
  }
  spawn_at(0.0);
}

void Simulation::schedule_arrivals() {
  std::vector<PendingVehicle> all;
  for (Direction d : kAllDirections) {
    ArrivalProcess proc{d, cfg_.mean_interarrival[slot_of(d)], cfg_.spawn_window, cfg_.seed};
    for (double t : generate_arrivals(proc)) {
      all.push_back({0, d, t});
    }
  }
  std::sort(all.begin(), all.end(), [](const PendingVehicle& a, const PendingVehicle& b) {
    if (a.scheduled != b.scheduled) return a.scheduled < b.scheduled;
    return index_of(a.direction) < index_of(b.direction);
  });
  int next_id = 1;
  for (PendingVehicle& v : all) {
    v.id = next_id++;
    queue_.push(v);
    result_.events.push_back({v.scheduled, v.id, EventKind::Scheduled, dir_detail(v.direction)});
  }
  result_.scheduled = static_cast<int>(all.size());
}

std::vector<VehicleSnapshot> Simulation::snapshot() const {
  std::vector<VehicleSnapshot> world;
  world.reserve(static_cast<std::size_t>(on_road_));
  for (Direction d : kAllDirections) {
    for (const VehicleState& v : lanes_[slot_of(d)]) {
      const auto it = last_accel_.find(v.id);
      world.push_back({v.id, v.direction, v.front_pos, v.speed,
                       it == last_accel_.end() ? 0.0 : it->second, v.committed});
    }
  }
  return world;
}

std::unordered_map<int, Decision> Simulation::decide(
    const std::vector<VehicleSnapshot>& world, double t) {
  if (cfg_.policy == PolicyKind::V2V) {
    return v2v_decision(world, cfg_.geometry, cfg_.vehicle, t, cfg_.v2v_margin, cfg_.dt)
        .decisions;
  }
  std::unordered_map<int, Decision> decisions;
  for (Direction d : kAllDirections) {
    for (const VehicleState& v : lanes_[slot_of(d)]) {
      if (v.committed) continue;
      decisions.emplace(v.id, light_decision(v, cfg_.light, cfg_.geometry, cfg_.vehicle, t, cfg_.dt));
    }
  }
  return decisions;
}

void Simulation::record_decision_flips(const std::unordered_map<int, Decision>& decisions,
                                       double t) {
  for (Direction d : kAllDirections) {
    for (const VehicleState& v : lanes_[slot_of(d)]) {
      const auto now_it = decisions.find(v.id);
      if (now_it == decisions.end()) continue;
      const auto prev_it = last_decision_.find(v.id);
      if (prev_it != last_decision_.end() && prev_it->second != now_it->second) {
        result_.events.push_back({t, v.id, EventKind::DecisionChanged,
                                  now_it->second == Decision::Brake ? "pass->brake"
                                                                    : "brake->pass"});
      }
      last_decision_[v.id] = now_it->second;
    }
  }
}

void Simulation::actuate_and_integrate(const std::unordered_map<int, Decision>& decisions,
                                       double t) {
  const double entry = cfg_.geometry.entry_line();
  for (Direction d : kAllDirections) {
    auto& lane = lanes_[slot_of(d)];
    // Commands first, all from the common pre-step world; then integrate.
    std::vector<double> cmd(lane.size());
    for (std::size_t i = 0; i < lane.size(); ++i) {
      const VehicleState& v = lane[i];
      std::optional<LeaderView> leader;
      if (i + 1 < lane.size()) {
        leader = LeaderView{lane[i + 1].rear_pos(cfg_.vehicle), lane[i + 1].speed};
      }
      std::optional<double> stop_target;
      if (!v.committed && decisions.at(v.id) == Decision::Brake) stop_target = entry;
      try {
        cmd[i] = car_following_accel(v, leader, stop_target, cfg_.vehicle, cfg_.dt).value();
      } catch (const HeadwayBreach& e) {
        report_violation(t, "vehicle " + std::to_string(v.id) + ": " + e.what());
        cmd[i] = -cfg_.vehicle.max_decel;
      }
    }
    for (std::size_t i = 0; i < lane.size(); ++i) {
      lane[i] = step(lane[i], AccelCommand(cmd[i], cfg_.vehicle), cfg_.dt, cfg_.vehicle);
      last_accel_[lane[i].id] = cmd[i];
    }
  }
}

void Simulation::commit_and_clear(double t, double t_next) {
  const double entry = cfg_.geometry.entry_line();
  const double exit = cfg_.geometry.exit_line();
  const double end = cfg_.geometry.path_length();
  for (Direction d : kAllDirections) {
    for (VehicleState& v : lanes_[slot_of(d)]) {
      const double prev_front = v.front_pos - v.speed * cfg_.dt;
      if (!v.committed && v.front_pos > entry) {
        v.committed = true;
        result_.events.push_back({t_next, v.id, EventKind::Committed, dir_detail(d)});
        last_decision_.erase(v.id);
        if (cfg_.policy == PolicyKind::Light &&
            phase_at(cfg_.light, t, axis_of(d)) == LightPhase::Red) {
          report_violation(t_next, "vehicle " + std::to_string(v.id) +
                                       " crossed the entry line on red");
        }
      }
      const double rear = v.rear_pos(cfg_.vehicle);
      const double prev_rear = prev_front - cfg_.vehicle.length;
      if (prev_rear <= exit && rear > exit) {
        result_.events.push_back({t_next, v.id, EventKind::Cleared, dir_detail(d)});
      }
      if (prev_front < end && v.front_pos >= end) {
        // Front-bumper crossing of the path end, interpolated inside the
        // tick; this is the exit time delays are measured against.
        end_crossing_time_[v.id] = t + (end - prev_front) / v.speed;
      }
    }
  }
}

void Simulation::despawn(double /*t*/, double t_next) {
  const double end = cfg_.geometry.path_length();
  for (Direction d : kAllDirections) {
    auto& lane = lanes_[slot_of(d)];
    while (!lane.empty() && lane.back().rear_pos(cfg_.vehicle) >= end) {
      const VehicleState v = lane.back();
      lane.pop_back();
      const auto it = end_crossing_time_.find(v.id);
      const double exit_time = it == end_crossing_time_.end() ? t_next : it->second;
      result_.records.push_back(
          {v.id, v.direction, v.scheduled_spawn, exit_time,
           delay_of(v.scheduled_spawn, exit_time, cfg_.geometry, cfg_.vehicle, cfg_.dt)});
      result_.events.push_back({t_next, v.id, EventKind::Despawned, dir_detail(d)});
      end_crossing_time_.erase(v.id);
      last_accel_.erase(v.id);
      last_decision_.erase(v.id);
      --on_road_;
      ++result_.despawned;
    }
  }
}

void Simulation::spawn_at(double t) {
  std::array<std::optional<LeaderView>, 4> rearmost;
  for (Direction d : kAllDirections) {
    const auto& lane = lanes_[slot_of(d)];
    if (!lane.empty()) {
      rearmost[slot_of(d)] =
          LeaderView{lane.front().rear_pos(cfg_.vehicle), lane.front().speed};
    }
  }
  for (const VehicleState& v :
       try_spawn(queue_, rearmost, t, cfg_.vehicle, cfg_.dt)) {
    lanes_[slot_of(v.direction)].push_front(v);
    ++on_road_;
    ++result_.spawned;
    result_.events.push_back({t, v.id, EventKind::Spawned, dir_detail(v.direction)});
  }
}

void Simulation::check_invariants(double t_next) {
  const double entry = cfg_.geometry.entry_line();
  const double exit = cfg_.geometry.exit_line();
  const double gap_floor = kMinHeadway - cfg_.vehicle.max_speed * cfg_.dt;
  bool ns_in_box = false;
  bool ew_in_box = false;
  for (Direction d : kAllDirections) {
    const auto& lane = lanes_[slot_of(d)];
    for (std::size_t i = 0; i < lane.size(); ++i) {
      const VehicleState& v = lane[i];
      if (v.front_pos > entry && v.rear_pos(cfg_.vehicle) < exit) {
        (axis_of(d) == Axis::NorthSouth ? ns_in_box : ew_in_box) = true;
      }
      if (i + 1 < lane.size()) {
        const double gap = lane[i + 1].rear_pos(cfg_.vehicle) - v.front_pos;
        if (gap < 0.0) {
          report_violation(t_next, "vehicles " + std::to_string(v.id) + " and " +
                                       std::to_string(lane[i + 1].id) + " overlap");
        } else if (gap < gap_floor - 1e-9) {
          report_violation(t_next, "headway gap " + std::to_string(gap) +
                                       " m between vehicles " + std::to_string(v.id) +
                                       " and " + std::to_string(lane[i + 1].id));
        }
      }
    }
  }
  if (ns_in_box && ew_in_box) {
    report_violation(t_next, "conflict-box co-occupancy by crossing directions");
  }
  if (result_.spawned - injected_ + static_cast<int>(queue_.total()) != result_.scheduled) {
    report_violation(t_next, "conservation: scheduled != spawned + queued");
  }
  if (result_.spawned != on_road_ + result_.despawned) {
    report_violation(t_next, "conservation: spawned != on-road + despawned");
  }
}

void Simulation::report_violation(double t, const std::string& what) {
  result_.violations.push_back({t, what});
  if (cfg_.strict) {
    throw SafetyViolation("t=" + std::to_string(t) + " s: " + what);
  }
}

void Simulation::tick() {
  const double t = now();
  const double t_next = static_cast<double>(tick_index_ + 1) * cfg_.dt;

  const auto world = snapshot();
  const auto decisions = decide(world, t);
  record_decision_flips(decisions, t);
  actuate_and_integrate(decisions, t);
  commit_and_clear(t, t_next);
  despawn(t, t_next);
  spawn_at(t_next);
  check_invariants(t_next);

  ++tick_index_;
  if (now() >= cfg_.drain_cap && (queue_.total() > 0 || on_road_ > 0)) {
    drain_capped_ = true;
  }
}

bool Simulation::finished() const {
  if (drain_capped_) return true;
  return now() >= cfg_.spawn_window && queue_.total() == 0 && on_road_ == 0;
}

SimResult Simulation::finish() {
  result_.drained = queue_.total() == 0 && on_road_ == 0;
  result_.end_time = now();
  std::sort(result_.records.begin(), result_.records.end(),
            [](const DelayRecord& a, const DelayRecord& b) {
              return a.vehicle_id < b.vehicle_id;
            });
  return std::move(result_);
}

SimResult run(const ScenarioConfig& cfg) {
  Simulation sim(cfg);
  while (!sim.finished()) sim.tick();
  return sim.finish();
}

SimResult run_with_initial(const ScenarioConfig& cfg,
                           const std::vector<VehicleState>& initial) {
  Simulation sim(cfg, initial);
  while (!sim.finished()) sim.tick();
  return sim.finish();
}

}  // namespace intersim
