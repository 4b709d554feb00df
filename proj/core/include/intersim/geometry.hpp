#pragma once

#include <array>

namespace intersim {

// Approach directions, numbered as marked on the intersection sketch:
// 1 and 3 run north-south, 2 and 4 east-west. A vehicle keeps its
// direction for the whole trip (straight crossings only).
enum class Direction : int { D1 = 1, D2 = 2, D3 = 3, D4 = 4 };

enum class Axis { NorthSouth, EastWest };

inline constexpr std::array<Direction, 4> kAllDirections{
    Direction::D1, Direction::D2, Direction::D3, Direction::D4};

constexpr int index_of(Direction d) { return static_cast<int>(d); }

// Zero-based index for per-direction arrays.
constexpr int slot_of(Direction d) { return static_cast<int>(d) - 1; }

constexpr Axis axis_of(Direction d) {
  return (index_of(d) % 2 == 1) ? Axis::NorthSouth : Axis::EastWest;
}

// Straight paths share the conflict box iff they run on different axes.
// Opposite directions use disjoint lanes; same direction is a plain
// car-following situation, not an intersection conflict.
constexpr bool conflicts(Direction a, Direction b) {
  return axis_of(a) != axis_of(b);
}

// Throws std::invalid_argument unless index is 1..4.
Direction direction_from_index(int index);

// Symmetric four-arm layout. Each path runs: approach arm, shared conflict
// box, departure arm of equal length. Positions are meters along the path
// from the spawn point; all four paths use identical coordinates.
struct IntersectionGeometry {
  double arm_length = 4000.0;  // m
  double lane_width = 3.5;     // m

  // One lane per direction, two per road, so the box spans two lanes.
  double box_side() const { return 2.0 * lane_width; }
  double entry_line() const { return arm_length; }
  double exit_line() const { return arm_length + box_side(); }
  double path_length() const { return 2.0 * arm_length + box_side(); }

  void validate() const;  // throws std::invalid_argument
};

enum class Line { Entry, Exit, End };

double position_of_line(const IntersectionGeometry& g, Line which);

}  // namespace intersim
