#include "intersim/arrivals.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace intersim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Top 53 bits of a u64 draw, mapped to [0, 1). Unlike
// std::uniform_real_distribution this is pinned down exactly.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::uint64_t substream_seed(std::uint64_t scenario_seed, Direction d) {
  return splitmix64(scenario_seed + static_cast<std::uint64_t>(index_of(d)));
}

std::vector<double> generate_arrivals(const ArrivalProcess& p) {
  if (std::isnan(p.mean_interarrival) || !(p.mean_interarrival > 0.5)) {
    throw std::invalid_argument(
        "mean inter-arrival T must exceed 0.5 s so the uniform support "
        "[T-0.5, T+0.5] stays positive");
  }
  if (!std::isfinite(p.spawn_window) || !(p.spawn_window >= 0.0)) {
    throw std::invalid_argument("spawn_window must be non-negative and finite");
  }

  std::vector<double> arrivals;
  if (std::isinf(p.mean_interarrival)) return arrivals;

  std::mt19937_64 rng(substream_seed(p.seed, p.direction));
  double t = 0.0;
  for (;;) {
    t += (p.mean_interarrival - 0.5) + unit_uniform(rng);
    if (t > p.spawn_window) break;
    arrivals.push_back(t);
  }
  return arrivals;
}

std::vector<VehicleState> try_spawn(
    SpawnQueue& q, const std::array<std::optional<LeaderView>, 4>& rearmost,
    double now, const VehicleParams& p, double dt, double min_headway) {
  std::vector<VehicleState> spawned;
  for (Direction d : kAllDirections) {
    const PendingVehicle* head = q.front(d);
    if (head == nullptr || head->scheduled > now) continue;

    if (const auto& tail = rearmost[slot_of(d)]; tail.has_value()) {
      const double certified_gap = tail->rear_pos +
                                   stopping_distance(tail->speed, p.max_decel) -
                                   stopping_distance(p.max_speed, p.max_decel);
      if (certified_gap < min_headway + p.max_speed * dt) continue;
    }

    VehicleState v;
    v.id = head->id;
    v.direction = d;
    v.front_pos = 0.0;
    v.speed = p.max_speed;
    v.scheduled_spawn = head->scheduled;
    v.actual_spawn = now;
    v.committed = false;
    spawned.push_back(v);
    q.pop(d);
  }
  return spawned;
}

}  // namespace intersim
