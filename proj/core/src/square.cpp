#include "recon/square.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "recon/errors.hpp"

namespace recon::square {

std::int64_t Raster::count(int x, int y, int bw, int bh) const {
  auto clampi = [](int v, int lo, int hi) { return std::max(lo, std::min(v, hi)); };
  int i1 = clampi(x - min_x, 0, w), j1 = clampi(y - min_y, 0, h);
  int i2 = clampi(x + bw - min_x, 0, w), j2 = clampi(y + bh - min_y, 0, h);
  if (i1 >= i2 || j1 >= j2) return 0;
  auto P = [&](int i, int j) { return prefix[static_cast<std::size_t>(j) * (w + 1) + i]; };
  std::int64_t in_box = P(i2, j2) - P(i1, j2) - P(i2, j1) + P(i1, j1);
  // cells fully outside the raster bounds are outside the polygon
  return in_box;
}

Raster rasterize(const GridPolygon& p) {
  auto diag = validate_polygon(p);
  if (!diag.empty()) throw ContractError("invalid polygon: " + diag.front());
  Raster r;
  int min_x = 1 << 30, max_x = -(1 << 30), min_y = 1 << 30, max_y = -(1 << 30);
  for (const auto& v : p.boundary) {
    min_x = std::min(min_x, v.x);
    max_x = std::max(max_x, v.x);
    min_y = std::min(min_y, v.y);
    max_y = std::max(max_y, v.y);
  }
  r.min_x = min_x;
  r.min_y = min_y;
  r.w = max_x - min_x;
  r.h = max_y - min_y;
  r.inside.assign(static_cast<std::size_t>(r.w) * r.h, 0);
  // Scanline with vertical edges.
  struct VEdge {
    int x, y1, y2;
  };
  std::vector<VEdge> edges;
  int n = static_cast<int>(p.boundary.size());
  for (int i = 0; i < n; ++i) {
    const auto& a = p.boundary[i];
    const auto& b = p.boundary[(i + 1) % n];
    if (a.x == b.x) edges.push_back({a.x, std::min(a.y, b.y), std::max(a.y, b.y)});
  }
  for (int y = min_y; y < max_y; ++y) {
    std::vector<int> xs;
    for (const auto& e : edges)
      if (e.y1 <= y && y + 1 <= e.y2) xs.push_back(e.x);
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2)
      for (int x = xs[k]; x < xs[k + 1]; ++x)
        r.inside[static_cast<std::size_t>(y - min_y) * r.w + (x - min_x)] = 1;
  }
  r.prefix.assign(static_cast<std::size_t>(r.w + 1) * (r.h + 1), 0);
  for (int j = 0; j < r.h; ++j)
    for (int i = 0; i < r.w; ++i) {
      std::size_t idx = static_cast<std::size_t>(j + 1) * (r.w + 1) + (i + 1);
      r.prefix[idx] = r.prefix[idx - 1] + r.prefix[idx - (r.w + 1)] -
                      r.prefix[idx - (r.w + 1) - 1] + r.inside[static_cast<std::size_t>(j) * r.w + i];
    }
  return r;
}

std::vector<std::string> validate_polygon(const GridPolygon& p) {
  std::vector<std::string> out;
  int n = static_cast<int>(p.boundary.size());
  if (n < 4) {
    out.push_back("fewer than four vertices");
    return out;
  }
  for (int i = 0; i < n; ++i) {
    const auto& a = p.boundary[i];
    const auto& b = p.boundary[(i + 1) % n];
    if (a.x != b.x && a.y != b.y) out.push_back("edge not axis-parallel");
    if (a.x == b.x && a.y == b.y) out.push_back("zero-length edge");
  }
  if (!out.empty()) return out;
  // Simplicity: no two non-adjacent edges intersect; adjacent edges meet only
  // at the shared vertex.
  auto seg = [&](int i) {
    return std::pair<Point, Point>{p.boundary[i], p.boundary[(i + 1) % n]};
  };
  auto overlap1d = [](int a1, int a2, int b1, int b2) {
    if (a1 > a2) std::swap(a1, a2);
    if (b1 > b2) std::swap(b1, b2);
    return std::max(a1, b1) <= std::min(a2, b2);
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      auto [a1, a2] = seg(i);
      auto [b1, b2] = seg(j);
      bool ah = a1.y == a2.y, bh = b1.y == b2.y;
      bool hit = false;
      if (ah == bh) {
        if (ah)
          hit = a1.y == b1.y && overlap1d(a1.x, a2.x, b1.x, b2.x);
        else
          hit = a1.x == b1.x && overlap1d(a1.y, a2.y, b1.y, b2.y);
        if (hit && adjacent) {
          // collinear adjacent edges would be a doubled-back boundary
          out.push_back("adjacent collinear edges overlap");
          return out;
        }
      } else {
        const auto& h1 = ah ? a1 : b1;
        const auto& h2 = ah ? a2 : b2;
        const auto& v1 = ah ? b1 : a1;
        const auto& v2 = ah ? b2 : a2;
        hit = overlap1d(h1.x, h2.x, v1.x, v1.x) && overlap1d(v1.y, v2.y, h1.y, h1.y);
      }
      if (!hit) continue;
      if (adjacent) continue;  // sharing exactly the articulation vertex is checked below
      out.push_back("boundary self-intersects");
      return out;
    }
  // Vertices must be distinct.
  std::set<Point> vs(p.boundary.begin(), p.boundary.end());
  if (static_cast<int>(vs.size()) != n) out.push_back("repeated boundary vertex");
  return out;
}

GridPolygon trace_boundary(const Raster& r) {
  // Boundary edges of the cell union, oriented with interior on the left.
  std::map<Point, Point> next;
  auto cell = [&](int x, int y) { return r.cell(x, y); };
  auto link = [&](Point a, Point b) {
    if (!next.emplace(a, b).second)
      throw InternalError("pinched boundary corner at (" + std::to_string(a.x) + "," +
                          std::to_string(a.y) + ")");
  };
  for (int y = r.min_y - 1; y <= r.min_y + r.h; ++y)
    for (int x = r.min_x - 1; x <= r.min_x + r.w; ++x) {
      if (!cell(x, y)) continue;
      if (!cell(x, y - 1)) link({x, y}, {x + 1, y});          // bottom, rightward
      if (!cell(x, y + 1)) link({x + 1, y + 1}, {x, y + 1});  // top, leftward
      if (!cell(x - 1, y)) link({x, y + 1}, {x, y});          // left, downward
      if (!cell(x + 1, y)) link({x + 1, y}, {x + 1, y + 1});  // right, upward
    }
  if (next.empty()) throw InternalError("empty region");
  // The map above is one-outgoing-per-corner only if no two boundary corners
  // coincide (pinch). Walk from the lexicographically smallest corner.
  GridPolygon poly;
  Point start = next.begin()->first;
  Point cur = start;
  std::size_t guard = 0;
  do {
    auto it = next.find(cur);
    if (it == next.end()) throw InternalError("boundary walk broke");
    Point nxt = it->second;
    next.erase(it);
    poly.boundary.push_back(cur);
    cur = nxt;
    if (++guard > 8 * r.inside.size() + 16) throw InternalError("boundary walk stuck");
  } while (!(cur == start));
  if (!next.empty()) throw InternalError("region boundary is disconnected (hole or split)");
  // Collapse collinear runs.
  GridPolygon out;
  int n = static_cast<int>(poly.boundary.size());
  for (int i = 0; i < n; ++i) {
    const Point& prev = poly.boundary[(i + n - 1) % n];
    const Point& curv = poly.boundary[i];
    const Point& nxt = poly.boundary[(i + 1) % n];
    bool collinear = (prev.x == curv.x && curv.x == nxt.x) || (prev.y == curv.y && curv.y == nxt.y);
    if (!collinear) out.boundary.push_back(curv);
  }
  return out;
}

std::vector<std::string> derive_center_map(const Raster& r, ReferenceCenterMap& map) {
  std::vector<std::string> out;
  map.cells.clear();
  int band_lo = (r.min_y - 7) / 8 - 1, band_hi = (r.min_y + r.h) / 8 + 1;
  for (int band = band_lo; band <= band_hi; ++band) {
    auto it = map.band_offset.find(band);
    int b = it == map.band_offset.end() ? 0 : it->second;
    if (b < 0 || b >= 8) {
      out.push_back("band offset out of range");
      return out;
    }
    for (int X = (r.min_x - b - 4) / 8 - 2; X <= (r.min_x + r.w) / 8 + 2; ++X) {
      int cx = 8 * X + b, cy = 8 * band;
      std::int64_t cnt = r.count(cx, cy, 4, 4);
      if (cnt == 16)
        map.cells.push_back({cx, cy});
      else if (cnt != 0)
        out.push_back("cell S_{" + std::to_string(X) + "," + std::to_string(band) +
                      "} is cut by the boundary");
    }
  }
  std::sort(map.cells.begin(), map.cells.end());
  return out;
}

bool is_valid_config(const Raster& r, const SquareConfiguration& c) {
  for (const auto& p : c.pos)
    if (!r.box_inside(p.x, p.y, 8, 8)) return false;
  for (std::size_t i = 0; i < c.pos.size(); ++i)
    for (std::size_t j = i + 1; j < c.pos.size(); ++j) {
      int dx = c.pos[i].x - c.pos[j].x;
      int dy = c.pos[i].y - c.pos[j].y;
      if (dx > -8 && dx < 8 && dy > -8 && dy < 8) return false;
    }
  return true;
}

namespace {

template <typename T>
T overlap_len(T a1, T a2, T b1, T b2) {
  T lo = a1 > b1 ? a1 : b1;
  T hi = a2 < b2 ? a2 : b2;
  return hi > lo ? hi - lo : T(0);
}

}  // namespace

std::int64_t reference_center_area(const Raster& r, const ReferenceCenterMap& map, int x, int y) {
  if (!r.box_inside(x, y, 8, 8)) throw ContractError("square outside the polygon");
  std::int64_t total = 0;
  for (const auto& cell : map.cells) {
    if (cell.x + 4 <= x || cell.x >= x + 8 || cell.y + 4 <= y || cell.y >= y + 8) continue;
    total += overlap_len<std::int64_t>(x, x + 8, cell.x, cell.x + 4) *
             overlap_len<std::int64_t>(y, y + 8, cell.y, cell.y + 4);
  }
  return total;
}

bool square_inside(const Raster& r, const Rat& x, const Rat& y) {
  using boost::multiprecision::cpp_int;
  auto floor_of = [](const Rat& v) {
    cpp_int q = numerator(v) / denominator(v);
    if (v < 0 && q * denominator(v) != numerator(v)) --q;
    return static_cast<long long>(q);
  };
  int x0 = static_cast<int>(floor_of(x)), y0 = static_cast<int>(floor_of(y));
  for (int i = x0; Rat(i) < x + 8; ++i)
    for (int j = y0; Rat(j) < y + 8; ++j) {
      // unit cell [i,i+1]x[j,j+1] intersects the open square
      if (Rat(i + 1) <= x || Rat(j + 1) <= y) continue;
      if (!r.cell(i, j)) return false;
    }
  return true;
}

Rat reference_center_area(const Raster& r, const ReferenceCenterMap& map, const Rat& x,
                          const Rat& y) {
  if (!square_inside(r, x, y)) throw ContractError("square outside the polygon");
  Rat total = 0;
  for (const auto& cell : map.cells) {
    Rat cx(cell.x), cy(cell.y);
    if (cx + 4 <= x || cx >= x + 8 || cy + 4 <= y || cy >= y + 8) continue;
    total += overlap_len<Rat>(x, x + 8, cx, cx + 4) * overlap_len<Rat>(y, y + 8, cy, cy + 4);
  }
  return total;
}

std::vector<int> assign_reference_centers(const Raster& r, const ReferenceCenterMap& map,
                                          const SquareConfiguration& c) {
  if (c.pos.size() != map.cells.size())
    throw ContractError("configuration is not perfect: squares=" + std::to_string(c.pos.size()) +
                        " centers=" + std::to_string(map.cells.size()));
  if (!is_valid_config(r, c)) throw ContractError("configuration invalid");
  std::vector<int> owner(c.pos.size(), -1);
  std::vector<int> used(map.cells.size(), 0);
  for (std::size_t s = 0; s < c.pos.size(); ++s) {
    for (std::size_t k = 0; k < map.cells.size(); ++k) {
      const auto& cell = map.cells[k];
      bool contained = cell.x >= c.pos[s].x && cell.x + 4 <= c.pos[s].x + 8 &&
                       cell.y >= c.pos[s].y && cell.y + 4 <= c.pos[s].y + 8;
      if (!contained) continue;
      if (owner[s] != -1)
        throw InternalError("square contains two reference centers");
      owner[s] = static_cast<int>(k);
    }
    if (owner[s] == -1) throw InternalError("square contains no reference center");
    if (used[owner[s]]++) throw InternalError("reference center owned twice");
  }
  return owner;
}

PositionClass classify_position(Point square, Point center) {
  bool contained = center.x >= square.x && center.x + 4 <= square.x + 8 && center.y >= square.y &&
                   center.y + 4 <= square.y + 8;
  if (!contained) throw ContractError("square does not contain the center");
  PositionClass pc;
  int dy = square.y - center.y;
  pc.vertical = dy == 0 ? VClass::Up : dy == -2 ? VClass::Vemid : dy == -4 ? VClass::Down
                                                                           : VClass::Other;
  int dx = square.x - center.x;
  pc.horizontal = dx == 0 ? HClass::Right : dx == -2 ? HClass::Homid : dx == -4 ? HClass::Left
                                                                                : HClass::Other;
  return pc;
}

std::string script_to_text(const MoveScript& s) {
  std::ostringstream os;
  for (const auto& m : s) {
    char d = m.dir == Dir::Up ? 'U' : m.dir == Dir::Down ? 'D' : m.dir == Dir::Left ? 'L' : 'R';
    os << m.square << " " << d << "\n";
  }
  return os.str();
}

MoveScript script_from_text(const std::string& text) {
  MoveScript s;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    int idx;
    char d;
    if (!(ls >> idx >> d)) throw ContractError("bad script line: " + line);
    Dir dir = d == 'U'   ? Dir::Up
              : d == 'D' ? Dir::Down
              : d == 'L' ? Dir::Left
              : d == 'R' ? Dir::Right
                         : throw ContractError("bad direction in: " + line);
    s.push_back({idx, dir});
  }
  return s;
}

namespace {

Point step(Point p, Dir d) {
  switch (d) {
    case Dir::Up: return {p.x, p.y + 1};
    case Dir::Down: return {p.x, p.y - 1};
    case Dir::Left: return {p.x - 1, p.y};
    case Dir::Right: return {p.x + 1, p.y};
  }
  return p;
}

bool placement_ok(const Raster& r, const SquareConfiguration& c, std::size_t moved, Point np) {
  if (!r.box_inside(np.x, np.y, 8, 8)) return false;
  for (std::size_t j = 0; j < c.pos.size(); ++j) {
    if (j == moved) continue;
    int dx = np.x - c.pos[j].x, dy = np.y - c.pos[j].y;
    if (dx > -8 && dx < 8 && dy > -8 && dy < 8) return false;
  }
  return true;
}

std::vector<Point> canon(const SquareConfiguration& c) {
  std::vector<Point> v = c.pos;
  std::sort(v.begin(), v.end());
  return v;
}

struct VecHash {
  std::size_t operator()(const std::vector<Point>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (const auto& p : v) {
      h = (h ^ static_cast<std::size_t>(p.x * 1000003 + p.y)) * 1099511628211ull;
    }
    return h;
  }
};

}  // namespace

SquareConfiguration run_script(const Raster& r, const SquareConfiguration& c0,
                               const MoveScript& script) {
  if (!is_valid_config(r, c0)) throw ContractError("start configuration invalid");
  SquareConfiguration c = c0;
  for (std::size_t i = 0; i < script.size(); ++i) {
    const auto& m = script[i];
    if (m.square < 0 || m.square >= static_cast<int>(c.pos.size()))
      throw ExecutionError("move references unknown square", i);
    Point np = step(c.pos[m.square], m.dir);
    if (!placement_ok(r, c, m.square, np))
      throw ExecutionError("move collides or leaves the polygon", i);
    c.pos[m.square] = np;
  }
  return c;
}

bool bfs_reachable(const Raster& r, const SquareConfiguration& c0, const SquareConfiguration& c1,
                   std::int64_t state_cap) {
  if (!is_valid_config(r, c0) || !is_valid_config(r, c1))
    throw ContractError("endpoint configuration invalid");
  auto target = canon(c1);
  std::unordered_set<std::vector<Point>, VecHash> seen;
  std::queue<std::vector<Point>> q;
  auto s0 = canon(c0);
  if (s0 == target) return true;
  seen.insert(s0);
  q.push(s0);
  while (!q.empty()) {
    auto cur = q.front();
    q.pop();
    SquareConfiguration cc{cur};
    for (std::size_t s = 0; s < cur.size(); ++s)
      for (Dir d : {Dir::Up, Dir::Down, Dir::Left, Dir::Right}) {
        Point np = step(cur[s], d);
        if (!placement_ok(r, cc, s, np)) continue;
        auto nxt = cur;
        nxt[s] = np;
        std::sort(nxt.begin(), nxt.end());
        if (seen.count(nxt)) continue;
        if (nxt == target) return true;
        if (static_cast<std::int64_t>(seen.size()) >= state_cap)
          throw ResourceLimitError("square BFS exceeded state cap");
        seen.insert(nxt);
        q.push(nxt);
      }
  }
  return false;
}

std::vector<SquareConfiguration> enumerate_reachable(const Raster& r,
                                                     const SquareConfiguration& c0,
                                                     std::int64_t state_cap) {
  if (!is_valid_config(r, c0)) throw ContractError("start configuration invalid");
  std::unordered_set<std::vector<Point>, VecHash> seen;
  std::queue<std::vector<Point>> q;
  auto s0 = canon(c0);
  seen.insert(s0);
  q.push(s0);
  std::vector<SquareConfiguration> out;
  while (!q.empty()) {
    auto cur = q.front();
    q.pop();
    out.push_back(SquareConfiguration{cur});
    SquareConfiguration cc{cur};
    for (std::size_t s = 0; s < cur.size(); ++s)
      for (Dir d : {Dir::Up, Dir::Down, Dir::Left, Dir::Right}) {
        Point np = step(cur[s], d);
        if (!placement_ok(r, cc, s, np)) continue;
        auto nxt = cur;
        nxt[s] = np;
        std::sort(nxt.begin(), nxt.end());
        if (seen.count(nxt)) continue;
        if (static_cast<std::int64_t>(seen.size()) >= state_cap)
          throw ResourceLimitError("square enumeration exceeded state cap");
        seen.insert(nxt);
        q.push(nxt);
      }
  }
  return out;
}

bool bfs_reachable_batched(const Raster& r, const SquareConfiguration& c0,
                           const SquareConfiguration& c1, std::int64_t state_cap) {
  if (!is_valid_config(r, c0) || !is_valid_config(r, c1))
    throw ContractError("endpoint configuration invalid");
  int k = static_cast<int>(c0.pos.size());
  if (k > 20) throw ResourceLimitError("batched BFS limited to 20 squares");
  auto target = canon(c1);
  std::unordered_set<std::vector<Point>, VecHash> seen;
  std::queue<std::vector<Point>> q;
  auto s0 = canon(c0);
  if (s0 == target) return true;
  seen.insert(s0);
  q.push(s0);
  while (!q.empty()) {
    auto cur = q.front();
    q.pop();
    for (Dir d : {Dir::Up, Dir::Down, Dir::Left, Dir::Right}) {
      for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
        auto nxt = cur;
        for (int s = 0; s < k; ++s)
          if (mask & (1u << s)) nxt[s] = step(nxt[s], d);
        // A same-direction batch is valid iff the final placement is valid:
        // movers processed front-to-back never collide in between.
        SquareConfiguration cc{nxt};
        if (!is_valid_config(r, cc)) continue;
        std::sort(nxt.begin(), nxt.end());
        if (seen.count(nxt)) continue;
        if (nxt == target) return true;
        if (static_cast<std::int64_t>(seen.size()) >= state_cap)
          throw ResourceLimitError("batched BFS exceeded state cap");
        seen.insert(nxt);
        q.push(nxt);
      }
    }
  }
  return false;
}

VarState variable_state(const Raster& r, const ReferenceCenterMap& map, const ComponentView& view,
                        const SquareConfiguration& c) {
  auto owner_square = [&](Point cell) -> Point {
    for (const auto& p : c.pos) {
      bool contained = cell.x >= p.x && cell.x + 4 <= p.x + 8 && cell.y >= p.y &&
                       cell.y + 4 <= p.y + 8;
      if (contained) return p;
    }
    throw ContractError("component head cell is not owned by any square");
  };
  (void)r;
  (void)map;
  Point bottom = owner_square(view.bottom_brown_cell);
  Point top = owner_square(view.top_brown_cell);
  HClass hb = classify_position(bottom, view.bottom_brown_cell).horizontal;
  HClass ht = classify_position(top, view.top_brown_cell).horizontal;
  if (ht == HClass::Homid) return VarState::Minus;
  if (hb == HClass::Homid) return VarState::Plus;
  return VarState::Transitional;
}

}  // namespace recon::square
