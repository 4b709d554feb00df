#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "intersim/geometry.hpp"
#include "intersim/vehicle.hpp"

namespace intersim {

// Seeded renewal process for one direction: i.i.d. uniform gaps on
// [T - 0.5 s, T + 0.5 s]. Each direction draws from its own substream of
// the scenario seed, so changing one direction's T leaves the other
// schedules untouched. T = +infinity disables the direction.
struct ArrivalProcess {
  Direction direction = Direction::D1;
  double mean_interarrival = 3.0;  // T, seconds; must exceed 0.5
  double spawn_window = 1800.0;    // s; arrivals past this are dropped
  std::uint64_t seed = 0;          // scenario seed
};

// splitmix64 applied to scenario_seed + direction index. Documented so
// traces stay portable.
std::uint64_t substream_seed(std::uint64_t scenario_seed, Direction d);

// Strictly increasing arrival instants <= spawn_window. mt19937_64 drives
// the draws and the u64 -> [0,1) mapping is (x >> 11) * 2^-53; both are
// pinned by the C++ standard, so schedules are bit-identical everywhere.
std::vector<double> generate_arrivals(const ArrivalProcess& p);

struct PendingVehicle {
  int id = 0;
  Direction direction = Direction::D1;
  double scheduled = 0.0;
};

// Scheduled arrivals not yet physically on the road, FIFO per direction.
class SpawnQueue {
 public:
  void push(const PendingVehicle& v) { queues_[slot_of(v.direction)].push_back(v); }

  const PendingVehicle* front(Direction d) const {
    const auto& q = queues_[slot_of(d)];
    return q.empty() ? nullptr : &q.front();
  }

  void pop(Direction d) { queues_[slot_of(d)].pop_front(); }

  std::size_t size(Direction d) const { return queues_[slot_of(d)].size(); }

  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& q : queues_) n += q.size();
    return n;
  }

 private:
  std::array<std::deque<PendingVehicle>, 4> queues_;
};

// Admits at most the head-of-queue vehicle per direction per tick. A
// vehicle enters at the spawn point at max speed, so admission demands
// that the rearmost on-road vehicle leave it a braking-consistent headway
// (gap plus the rearmost vehicle's stopping budget minus the entrant's)
// with one tick of travel to spare; otherwise the arrival keeps waiting
// in the queue and the wait accrues toward its delay, which is clocked
// from the scheduled time. On a free road this reduces to a plain
// 30 m + one-tick gap; against a slowed or stopped queue tail it demands
// the extra room that makes a max-speed entry safe.
std::vector<VehicleState> try_spawn(
    SpawnQueue& q, const std::array<std::optional<LeaderView>, 4>& rearmost,
    double now, const VehicleParams& p, double dt,
    double min_headway = kMinHeadway);

}  // namespace intersim
