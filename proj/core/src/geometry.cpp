#include "intersim/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace intersim {

Direction direction_from_index(int index) {
  if (index < 1 || index > 4) {
    throw std::invalid_argument("direction index must be 1..4, got " +
                                std::to_string(index));
  }
  return static_cast<Direction>(index);
}

void IntersectionGeometry::validate() const {
  if (!std::isfinite(arm_length) || !(arm_length > 0.0)) {
    throw std::invalid_argument("geometry arm_length must be positive");
  }
  if (!std::isfinite(lane_width) || !(lane_width > 0.0)) {
    throw std::invalid_argument("geometry lane_width must be positive");
  }
}

double position_of_line(const IntersectionGeometry& g, Line which) {
  switch (which) {
    case Line::Entry:
      return g.entry_line();
    case Line::Exit:
      return g.exit_line();
    case Line::End:
      return g.path_length();
  }
  throw std::invalid_argument("unknown line selector");
}

}  // namespace intersim
