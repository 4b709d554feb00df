#pragma once

#include <unordered_map>
#include <vector>

#include "intersim/geometry.hpp"
#include "intersim/vehicle.hpp"

namespace intersim {

// Per-tick verdict for an uncommitted vehicle. Pass: follow the lane and
// ignore the entry line. Brake: additionally aim to stop at the entry
// line. Committed vehicles (front bumper past the line) never yield and
// are implicitly Pass from then on.
enum class Decision { Pass, Brake };

enum class LightPhase { Green, Yellow, Red };

// Fixed-cycle signal. green + yellow must equal red so the two axes
// alternate exactly: one axis shows green-or-yellow iff the other is red.
struct LightSchedule {
  double green = 30.0;   // s
  double yellow = 3.0;   // s
  double red = 33.0;     // s
  Axis phase_origin = Axis::NorthSouth;  // axis that is green at t = 0

  double cycle() const { return green + yellow + red; }
  void validate() const;  // throws std::invalid_argument
};

LightPhase phase_at(const LightSchedule& s, double t, Axis axis);

// Green: pass. Yellow: stop unless the vehicle is past the point of no
// return, i.e. even immediate full braking (per-tick law) would carry it
// over the line. Red: stop. Callers only ask about uncommitted vehicles.
Decision light_decision(const VehicleState& v, const LightSchedule& s,
                        const IntersectionGeometry& g, const VehicleParams& p,
                        double t, double dt);

// One vehicle's state as shared over the ideal instantaneous V2V channel.
struct VehicleSnapshot {
  int id = 0;
  Direction direction = Direction::D1;
  double front_pos = 0.0;
  double speed = 0.0;
  double accel = 0.0;  // last applied command
  bool committed = false;
};

// A granted conflict-box occupancy interval.
struct Reservation {
  int vehicle_id = 0;
  Direction direction = Direction::D1;
  double enter_time = 0.0;
  double clear_time = 0.0;
};

// The box bookings of one decision round. Rebuilt from live state every
// tick; nothing is retained between rounds.
class ReservationSchedule {
 public:
  void add(const Reservation& r);

  // True iff [enter, clear] stays clear of every booking on the crossing
  // axis. Touching intervals do not conflict.
  bool admits(Direction d, double enter, double clear) const;

  const std::vector<Reservation>& entries() const { return entries_; }

 private:
  // Per axis: enter-sorted intervals plus a running max of clear times,
  // so an overlap probe is one binary search.
  struct AxisIntervals {
    std::vector<double> enters;
    std::vector<double> clears;
    std::vector<double> prefix_max_clear;
  };

  AxisIntervals per_axis_[2];
  std::vector<Reservation> entries_;
};

// FCFS order: ascending entry-line ETA, ties by direction index, then id.
// A deterministic total order, independent of the input permutation.
std::vector<VehicleSnapshot> v2v_priority(std::vector<VehicleSnapshot> candidates,
                                          const IntersectionGeometry& g,
                                          const VehicleParams& p);

struct V2VOutcome {
  std::unordered_map<int, Decision> decisions;  // one entry per uncommitted vehicle
  ReservationSchedule schedule;
};

// The cooperative brake-or-pass round. Seeds the schedule with every
// committed vehicle's live occupancy interval, books candidates past the
// braking point of no return as committed-in-effect (they will cross no
// matter what; denying them would be fiction), then serves the remaining
// candidates in FCFS order: one whose margin-widened interval fits is
// granted Pass and booked; everyone else brakes toward their entry line
// and bids again next tick. With exact shared snapshots every vehicle
// would compute identical grants, so one evaluation serves all.
V2VOutcome v2v_decision(const std::vector<VehicleSnapshot>& world,
                        const IntersectionGeometry& g, const VehicleParams& p,
                        double now, double margin, double dt);

}  // namespace intersim
