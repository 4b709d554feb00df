#pragma once

#include <cstddef>
#include <vector>

#include "intersim/geometry.hpp"
#include "intersim/vehicle.hpp"

namespace intersim {

// One exit record per vehicle, the unit of every reported statistic.
// exit_time is when the front bumper reached the end of the path
// (interpolated inside the crossing tick); delay is measured from the
// scheduled spawn, so time spent waiting in the spawn queue counts.
struct DelayRecord {
  int vehicle_id = 0;
  Direction direction = Direction::D1;
  double scheduled_spawn = 0.0;  // s
  double exit_time = 0.0;        // s
  double delay = 0.0;            // s, >= 0
};

// path_length / max_speed: the zero-delay baseline.
double free_flow_time(const IntersectionGeometry& g, const VehicleParams& p);

// exit - scheduled - free-flow time. One tick of negative slack clamps to
// zero; anything more negative means the simulation is inconsistent.
double delay_of(double scheduled_spawn, double exit_time,
                const IntersectionGeometry& g, const VehicleParams& p, double dt);

class EmpiricalCDF {
 public:
  // Values need not be sorted. An empty CDF evaluates to 0 everywhere and
  // rejects quantile queries.
  explicit EmpiricalCDF(std::vector<double> values);

  // Fraction of samples <= x; non-decreasing and right-continuous.
  double operator()(double x) const;

  // Lower empirical quantile: the smallest sample whose cumulative mass
  // reaches q. quantile(0.5) is the median. Throws std::invalid_argument
  // on an empty CDF or q outside [0, 1].
  double quantile(double q) const;

  std::size_t size() const { return sorted_.size(); }
  const std::vector<double>& sorted() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

// Fraction of values strictly greater than threshold. Throws on empty input.
double exceedance_fraction(const std::vector<double>& values, double threshold);

std::vector<double> delays_of(const std::vector<DelayRecord>& records);
std::vector<double> delays_of(const std::vector<DelayRecord>& records, Direction d);

}  // namespace intersim
