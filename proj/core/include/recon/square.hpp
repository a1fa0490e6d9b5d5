#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace recon::square {

using Rat = boost::multiprecision::cpp_rational;

struct Point {
  int x = 0;
  int y = 0;
  bool operator==(const Point&) const = default;
  auto operator<=>(const Point&) const = default;
};

/// Simple orthogonal polygon, counterclockwise integer vertices.
struct GridPolygon {
  std::vector<Point> boundary;
};

/// Unit-cell occupancy of a polygon interior with O(1) box queries.
struct Raster {
  int min_x = 0, min_y = 0, w = 0, h = 0;
  std::vector<std::uint8_t> inside;
  std::vector<std::int64_t> prefix;

  bool cell(int x, int y) const {
    int i = x - min_x, j = y - min_y;
    if (i < 0 || j < 0 || i >= w || j >= h) return false;
    return inside[static_cast<std::size_t>(j) * w + i] != 0;
  }
  // number of inside cells in [x, x+bw) x [y, y+bh)
  std::int64_t count(int x, int y, int bw, int bh) const;
  bool box_inside(int x, int y, int bw, int bh) const {
    return count(x, y, bw, bh) == static_cast<std::int64_t>(bw) * bh;
  }
  std::int64_t area() const { return count(min_x, min_y, w, h); }
};

Raster rasterize(const GridPolygon& p);

/// Trace the boundary of a 4-connected, hole-free raster region (ccw).
/// Throws InternalError if the region is disconnected or has holes.
GridPolygon trace_boundary(const Raster& r);

std::vector<std::string> validate_polygon(const GridPolygon& p);

/// Lower-left corners of 8x8 squares.
struct SquareConfiguration {
  std::vector<Point> pos;
};

/// Reference centers: per band y an offset b_y, and the derived 4x4 cells
/// S_xy = [8x+b_y, 8x+b_y+4] x [8y, 8y+4] contained in the polygon.
struct ReferenceCenterMap {
  std::map<int, int> band_offset;  // band index y -> b_y in [0,8)
  std::vector<Point> cells;        // lower-left corners, sorted
};

/// Builds the cell set and checks the in-or-out law for every S_xy.
/// Returns diagnostics (empty = law holds).
std::vector<std::string> derive_center_map(const Raster& r, ReferenceCenterMap& map);

bool is_valid_config(const Raster& r, const SquareConfiguration& c);

/// Exact overlap area between an 8x8 square at integer position and the
/// reference centers.
std::int64_t reference_center_area(const Raster& r, const ReferenceCenterMap& map, int x, int y);

/// Exact overlap area at a rational position; the square must lie inside P.
Rat reference_center_area(const Raster& r, const ReferenceCenterMap& map, const Rat& x,
                          const Rat& y);

bool square_inside(const Raster& r, const Rat& x, const Rat& y);

/// square index -> cell index; every square must contain exactly one cell.
std::vector<int> assign_reference_centers(const Raster& r, const ReferenceCenterMap& map,
                                          const SquareConfiguration& c);

enum class VClass { Up, Vemid, Down, Other };
enum class HClass { Left, Homid, Right, Other };
struct PositionClass {
  VClass vertical = VClass::Other;
  HClass horizontal = HClass::Other;
};

PositionClass classify_position(Point square, Point center);

enum class Dir : std::uint8_t { Up, Down, Left, Right };
struct Move {
  int square = 0;
  Dir dir = Dir::Up;
};
using MoveScript = std::vector<Move>;

std::string script_to_text(const MoveScript& s);
MoveScript script_from_text(const std::string& text);

/// Applies unit moves, checking validity after each; throws ExecutionError
/// with the offending index.
SquareConfiguration run_script(const Raster& r, const SquareConfiguration& c0,
                               const MoveScript& script);

/// Unlabeled BFS over configurations under single unit moves.
bool bfs_reachable(const Raster& r, const SquareConfiguration& c0, const SquareConfiguration& c1,
                   std::int64_t state_cap = 2'000'000);

/// Same reachability under batched moves: any subset of squares shifting one
/// unit in a common direction per step.
bool bfs_reachable_batched(const Raster& r, const SquareConfiguration& c0,
                           const SquareConfiguration& c1, std::int64_t state_cap = 2'000'000);

/// Enumerate all configurations reachable from c0 (canonical sorted form).
std::vector<SquareConfiguration> enumerate_reachable(const Raster& r,
                                                     const SquareConfiguration& c0,
                                                     std::int64_t state_cap = 2'000'000);

struct ComponentView {
  Point bottom_brown_cell;  // reference cell of the bottom main row's head
  Point top_brown_cell;     // reference cell of the top main row's head
};

enum class VarState { Plus, Minus, Transitional };

/// Reads a component's state from the horizontal classes of the two squares
/// owning the brown cells: top homid -> minus, bottom homid -> plus.
VarState variable_state(const Raster& r, const ReferenceCenterMap& map, const ComponentView& view,
                        const SquareConfiguration& c);

}  // namespace recon::square
