#include "intersim/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace intersim {

void LightSchedule::validate() const {
  for (double v : {green, yellow, red}) {
    if (!std::isfinite(v) || !(v > 0.0)) {
      throw std::invalid_argument("light durations must be positive and finite");
    }
  }
  if (std::abs(green + yellow - red) > 1e-9) {
    throw std::invalid_argument(
        "light schedule needs green + yellow == red so the axes alternate exactly");
  }
}

LightPhase phase_at(const LightSchedule& s, double t, Axis axis) {
  const double cycle = s.cycle();
  double local = std::fmod(t, cycle);
  if (local < 0.0) local += cycle;
  if (axis != s.phase_origin) {
    // The complement axis runs the same pattern shifted by its red phase.
    local = std::fmod(local + s.red, cycle);
  }
  if (local < s.green) return LightPhase::Green;
  if (local < s.green + s.yellow) return LightPhase::Yellow;
  return LightPhase::Red;
}

Decision light_decision(const VehicleState& v, const LightSchedule& s,
                        const IntersectionGeometry& g, const VehicleParams& p,
                        double t, double dt) {
  switch (phase_at(s, t, axis_of(v.direction))) {
    case LightPhase::Green:
      return Decision::Pass;
    case LightPhase::Yellow: {
      // Past the point of no return the only consistent verdict is Pass:
      // the braking law itself could no longer halt before the line.
      const double dist = g.entry_line() - v.front_pos;
      return past_point_of_no_return(dist, v.speed, p, dt) ? Decision::Pass
                                                           : Decision::Brake;
    }
    case LightPhase::Red:
      return Decision::Brake;
  }
  throw std::logic_error("unreachable light phase");
}

void ReservationSchedule::add(const Reservation& r) {
  entries_.push_back(r);
  AxisIntervals& ax = per_axis_[axis_of(r.direction) == Axis::NorthSouth ? 0 : 1];
  const auto pos = std::upper_bound(ax.enters.begin(), ax.enters.end(), r.enter_time);
  const auto idx = static_cast<std::size_t>(pos - ax.enters.begin());
  ax.enters.insert(pos, r.enter_time);
  ax.clears.insert(ax.clears.begin() + idx, r.clear_time);
  ax.prefix_max_clear.resize(ax.enters.size());
  for (std::size_t i = idx; i < ax.enters.size(); ++i) {
    ax.prefix_max_clear[i] =
        (i == 0) ? ax.clears[i] : std::max(ax.prefix_max_clear[i - 1], ax.clears[i]);
  }
}

bool ReservationSchedule::admits(Direction d, double enter, double clear) const {
  const AxisIntervals& other =
      per_axis_[axis_of(d) == Axis::NorthSouth ? 1 : 0];
  if (other.enters.empty()) return true;
  // Conflict iff some crossing interval has enter_j < clear and clear_j > enter.
  const auto pos = std::lower_bound(other.enters.begin(), other.enters.end(), clear);
  const auto n = static_cast<std::size_t>(pos - other.enters.begin());
  if (n == 0) return true;
  return other.prefix_max_clear[n - 1] <= enter;
}

std::vector<VehicleSnapshot> v2v_priority(std::vector<VehicleSnapshot> candidates,
                                          const IntersectionGeometry& g,
                                          const VehicleParams& p) {
  const double entry = g.entry_line();
  std::sort(candidates.begin(), candidates.end(),
            [&](const VehicleSnapshot& a, const VehicleSnapshot& b) {
              const double ea = eta_over(entry - a.front_pos, a.speed, p);
              const double eb = eta_over(entry - b.front_pos, b.speed, p);
              return std::tie(ea, a.direction, a.id) < std::tie(eb, b.direction, b.id);
            });
  return candidates;
}

V2VOutcome v2v_decision(const std::vector<VehicleSnapshot>& world,
                        const IntersectionGeometry& g, const VehicleParams& p,
                        double now, double margin, double dt) {
  if (!std::isfinite(margin) || margin < 0.0) {
    throw std::invalid_argument("v2v margin must be >= 0 and finite");
  }

  V2VOutcome out;
  const double entry = g.entry_line();
  const double exit = g.exit_line();

  // Committed vehicles hold their slot until the rear bumper is out.
  // Candidates past the point of no return (full braking can no longer
  // halt them before the line) are booked the same way: their crossing is
  // physically settled, so later bids must plan around it.
  std::vector<VehicleSnapshot> candidates;
  for (const VehicleSnapshot& v : world) {
    const bool unstoppable =
        !v.committed &&
        past_point_of_no_return(entry - v.front_pos, v.speed, p, dt);
    if (v.committed || unstoppable) {
      if (unstoppable) out.decisions.emplace(v.id, Decision::Pass);
      const double remaining = exit + p.length - v.front_pos;
      if (remaining <= 0.0) continue;  // already past the box
      out.schedule.add({v.id, v.direction,
                        now + eta_over(entry - v.front_pos, v.speed, p),
                        now + eta_over(remaining, v.speed, p)});
    } else {
      candidates.push_back(v);
    }
  }

  candidates = v2v_priority(std::move(candidates), g, p);
  for (const VehicleSnapshot& c : candidates) {
    const double enter = now + eta_over(entry - c.front_pos, c.speed, p);
    const double clear = now + eta_over(exit + p.length - c.front_pos, c.speed, p);
    if (out.schedule.admits(c.direction, enter - margin, clear + margin)) {
      out.schedule.add({c.id, c.direction, enter, clear});
      out.decisions.emplace(c.id, Decision::Pass);
    } else {
      out.decisions.emplace(c.id, Decision::Brake);
    }
  }
  return out;
}

}  // namespace intersim
