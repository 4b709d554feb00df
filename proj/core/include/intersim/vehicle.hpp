#pragma once

#include <optional>
#include <stdexcept>

#include "intersim/geometry.hpp"

namespace intersim {

// Minimum bumper-to-bumper gap every follower keeps to its leader.
inline constexpr double kMinHeadway = 30.0;

// Performance envelope, identical for every vehicle in a scenario.
struct VehicleParams {
  double length = 5.0;      // m
  double width = 2.0;       // m
  double max_speed = 15.0;  // m/s
  double max_accel = 10.0;  // m/s^2
  double max_decel = 10.0;  // m/s^2, stored positive

  void validate() const;  // throws std::invalid_argument
};

// Longitudinal state along the vehicle's own straight path. front_pos is
// the front bumper, measured from the spawn point; it never decreases.
struct VehicleState {
  int id = 0;
  Direction direction = Direction::D1;
  double front_pos = 0.0;        // m
  double speed = 0.0;            // m/s, in [0, max_speed]
  double scheduled_spawn = 0.0;  // s, arrival-process time
  double actual_spawn = 0.0;     // s, when the vehicle physically entered
  bool committed = false;        // front bumper has crossed the entry line

  double rear_pos(const VehicleParams& p) const { return front_pos - p.length; }
};

// Bounded longitudinal actuation, the output of every policy.
class AccelCommand {
 public:
  AccelCommand(double value, const VehicleParams& p);

  double value() const { return value_; }

  static AccelCommand full_accel(const VehicleParams& p) { return {p.max_accel, p}; }
  static AccelCommand coast(const VehicleParams& p) { return {0.0, p}; }
  static AccelCommand full_brake(const VehicleParams& p) { return {-p.max_decel, p}; }

 private:
  double value_;
};

// What a follower needs to know about the vehicle ahead in its lane.
struct LeaderView {
  double rear_pos = 0.0;
  double speed = 0.0;
};

// Raised when the headway is already broken and no command can restore
// it; that is an upstream invariant breach, not a recoverable condition.
class HeadwayBreach : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Semi-implicit Euler: update speed first, then advance with the new
// speed. Speed stays in [0, max_speed]; displacement is never negative.
VehicleState step(const VehicleState& s, AccelCommand a, double dt,
                  const VehicleParams& p);

// Continuous-time braking distance v^2 / (2 d).
double stopping_distance(double speed, double decel);

// Distance covered by per-tick full braking until standstill. Shorter
// than the continuous value by at most one tick of travel.
double discrete_stop_distance(double speed, const VehicleParams& p, double dt);

// True when even immediate full braking can no longer halt the vehicle
// within `distance`. Carries a small positive tolerance: a vehicle braked
// exactly onto its stopping envelope rides distance == stop distance for
// the rest of the descent, and the classification must not flicker with
// accumulated floating-point noise.
bool past_point_of_no_return(double distance, double speed,
                             const VehicleParams& p, double dt);

// Earliest arrival time over `distance`, accelerating flat out to max
// speed and cruising from there. Closed form; zero for distance <= 0.
double eta_over(double distance, double speed, const VehicleParams& p);

// Front-bumper ETA at an absolute path position.
double eta_to(const VehicleState& s, double target, const VehicleParams& p);

// Time until the rear bumper is past `exit_line` under the same profile,
// i.e. until the vehicle has completely left the stretch before it.
double clear_time(const VehicleState& s, double exit_line, const VehicleParams& p);

// The car-following law: the largest command of {+max_accel, 0, -max_decel}
// that, judged one tick ahead with the leader braking flat out, leaves the
// bumper gap at least `min_headway` after both stopping budgets are settled.
// A stop target acts as a stationary virtual leader of zero length with no
// required gap, so the follower's front bumper halts at the target. Both
// constraints may be active at once; with neither, the road is free and the
// command is full acceleration. Throws HeadwayBreach when nothing is safe
// and the gap is already violated.
AccelCommand car_following_accel(const VehicleState& follower,
                                 const std::optional<LeaderView>& leader,
                                 std::optional<double> stop_target,
                                 const VehicleParams& p, double dt,
                                 double min_headway = kMinHeadway);

}  // namespace intersim
