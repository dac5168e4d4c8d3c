#ifndef GNOC_GEOMETRY_HPP
#define GNOC_GEOMETRY_HPP

#include <cstdint>
#include <string>

namespace gnoc {

// Row 0 is the north edge, column 0 the west edge. Result sinks sit one
// column east of the mesh, so a coordinate with col == mesh_cols addresses
// the memory element of that row.
struct Coord {
  int16_t row = 0;
  int16_t col = 0;

  friend bool operator==(const Coord&, const Coord&) = default;
  friend auto operator<=>(const Coord&, const Coord&) = default;
};

enum class Dir : uint8_t { North = 0, East = 1, South = 2, West = 3, Local = 4 };
inline constexpr int kNumPorts = 5;

inline const char* dir_name(Dir d) {
  switch (d) {
    case Dir::North: return "N";
    case Dir::East:  return "E";
    case Dir::South: return "S";
    case Dir::West:  return "W";
    case Dir::Local: return "L";
  }
  return "?";
}

inline std::string coord_str(Coord c) {
  return "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
}

// Dimension-ordered XY routing: move along the row (X/columns) first, then
// along the column (Y/rows). A destination column equal to mesh_cols routes
// east off the edge into the sink.
inline Dir xy_route(Coord local, Coord dst) {
  if (dst.col > local.col) return Dir::East;
  if (dst.col < local.col) return Dir::West;
  if (dst.row > local.row) return Dir::South;
  if (dst.row < local.row) return Dir::North;
  return Dir::Local;
}

}  // namespace gnoc

#endif
