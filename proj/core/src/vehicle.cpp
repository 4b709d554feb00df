#include "intersim/vehicle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace intersim {

namespace {

void require_positive(double v, const char* name) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    throw std::invalid_argument(std::string("vehicle ") + name +
                                " must be positive and finite");
  }
}

}  // namespace

void VehicleParams::validate() const {
  require_positive(length, "length");
  require_positive(width, "width");
  require_positive(max_speed, "max_speed");
  require_positive(max_accel, "max_accel");
  require_positive(max_decel, "max_decel");
}

AccelCommand::AccelCommand(double value, const VehicleParams& p) : value_(value) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("acceleration command must be finite");
  }
  if (value < -p.max_decel || value > p.max_accel) {
    throw std::invalid_argument("acceleration command outside [-max_decel, +max_accel]");
  }
}

VehicleState step(const VehicleState& s, AccelCommand a, double dt,
                  const VehicleParams& p) {
  if (!std::isfinite(dt) || !(dt > 0.0)) {
    throw std::invalid_argument("step: dt must be positive and finite");
  }
  if (!std::isfinite(s.front_pos) || !std::isfinite(s.speed)) {
    throw std::invalid_argument("step: non-finite vehicle state");
  }
  VehicleState out = s;
  out.speed = std::clamp(s.speed + a.value() * dt, 0.0, p.max_speed);
  out.front_pos = s.front_pos + out.speed * dt;
  return out;
}

double stopping_distance(double speed, double decel) {
  if (!(speed >= 0.0)) throw std::invalid_argument("stopping_distance: speed must be >= 0");
  if (!(decel > 0.0)) throw std::invalid_argument("stopping_distance: decel must be > 0");
  return speed * speed / (2.0 * decel);
}

double discrete_stop_distance(double speed, const VehicleParams& p, double dt) {
  double v = std::clamp(speed, 0.0, p.max_speed);
  double dist = 0.0;
  while (v > 0.0) {
    v = std::max(0.0, v - p.max_decel * dt);
    dist += v * dt;
  }
  return dist;
}

bool past_point_of_no_return(double distance, double speed,
                             const VehicleParams& p, double dt) {
  return distance < discrete_stop_distance(speed, p, dt) + 1e-6;
}

double eta_over(double distance, double speed, const VehicleParams& p) {
  if (!std::isfinite(distance) || !std::isfinite(speed)) {
    throw std::invalid_argument("eta_over: non-finite input");
  }
  if (distance <= 0.0) return 0.0;
  const double v0 = std::clamp(speed, 0.0, p.max_speed);
  const double vm = p.max_speed;
  const double a = p.max_accel;
  const double accel_dist = (vm * vm - v0 * v0) / (2.0 * a);
  if (distance <= accel_dist) {
    return (std::sqrt(v0 * v0 + 2.0 * a * distance) - v0) / a;
  }
  return (vm - v0) / a + (distance - accel_dist) / vm;
}

double eta_to(const VehicleState& s, double target, const VehicleParams& p) {
  return eta_over(target - s.front_pos, s.speed, p);
}

double clear_time(const VehicleState& s, double exit_line, const VehicleParams& p) {
  return eta_over(exit_line + p.length - s.front_pos, s.speed, p);
}

AccelCommand car_following_accel(const VehicleState& follower,
                                 const std::optional<LeaderView>& leader,
                                 std::optional<double> stop_target,
                                 const VehicleParams& p, double dt,
                                 double min_headway) {
  const auto budget = [&](double v) { return stopping_distance(v, p.max_decel); };

  const auto safe_with = [&](double a) {
    const double v_next = std::clamp(follower.speed + a * dt, 0.0, p.max_speed);
    const double front_next = follower.front_pos + v_next * dt;
    if (leader) {
      // Worst case: the leader full-brakes from this tick on.
      const double lv_next = std::max(0.0, leader->speed - p.max_decel * dt);
      const double lrear_next = leader->rear_pos + lv_next * dt;
      if (lrear_next - front_next + budget(lv_next) - budget(v_next) < min_headway) {
        return false;
      }
    }
    if (stop_target) {
      if (*stop_target - front_next - budget(v_next) < 0.0) return false;
    }
    return true;
  };

  for (double a : {p.max_accel, 0.0, -p.max_decel}) {
    if (safe_with(a)) return AccelCommand(a, p);
  }

  const bool gap_broken =
      (leader && leader->rear_pos - follower.front_pos < min_headway) ||
      (stop_target && *stop_target < follower.front_pos);
  if (gap_broken) {
    throw HeadwayBreach("headway already violated and no command is safe");
  }
  return AccelCommand::full_brake(p);
}

}  // namespace intersim
