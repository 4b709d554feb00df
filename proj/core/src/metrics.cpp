#include "intersim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace intersim {

double free_flow_time(const IntersectionGeometry& g, const VehicleParams& p) {
  return g.path_length() / p.max_speed;
}

double delay_of(double scheduled_spawn, double exit_time,
                const IntersectionGeometry& g, const VehicleParams& p,
                double dt) {
  if (!(exit_time >= scheduled_spawn)) {
    throw std::invalid_argument("delay_of: exit_time precedes scheduled spawn");
  }
  const double raw = exit_time - scheduled_spawn - free_flow_time(g, p);
  if (raw < -dt) {
    throw std::logic_error(
        "delay_of: delay below -dt (" + std::to_string(raw) +
        " s); traversal faster than free flow indicates an engine defect");
  }
  return raw > 0.0 ? raw : 0.0;  // avoids a stray -0.0 in the outputs
}

EmpiricalCDF::EmpiricalCDF(std::vector<double> values) : sorted_(std::move(values)) {
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCDF::operator()(double x) const {
  if (sorted_.empty()) return 0.0;
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCDF::quantile(double q) const {
  if (sorted_.empty()) throw std::invalid_argument("quantile of an empty CDF");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level must be in [0, 1]");
  const auto n = static_cast<double>(sorted_.size());
  // Smallest k with k/n >= q; the epsilon guards against cases like
  // 0.3 * 100 landing a hair above 30.0.
  auto k = static_cast<std::size_t>(std::ceil(q * n - 1e-9));
  if (k < 1) k = 1;
  if (k > sorted_.size()) k = sorted_.size();
  return sorted_[k - 1];
}

double exceedance_fraction(const std::vector<double>& values, double threshold) {
  if (values.empty()) throw std::invalid_argument("exceedance_fraction of empty input");
  const auto count = std::count_if(values.begin(), values.end(),
                                   [&](double v) { return v > threshold; });
  return static_cast<double>(count) / static_cast<double>(values.size());
}

std::vector<double> delays_of(const std::vector<DelayRecord>& records) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.delay);
  return out;
}

std::vector<double> delays_of(const std::vector<DelayRecord>& records, Direction d) {
  std::vector<double> out;
  for (const auto& r : records) {
    if (r.direction == d) out.push_back(r.delay);
  }
  return out;
}

}  // namespace intersim
