#include "recon/gen.hpp"

#include <algorithm>
#include <random>

#include "recon/errors.hpp"

namespace recon::gen {

using ncl::Dart;
using ncl::Edge;
using ncl::EdgeColor;
using ncl::NclGraph;
using ncl::NclInstance;
using ncl::Orientation;
using ncl::Vertex;
using ncl::VertexKind;

NclInstance theta_instance() {
  NclInstance inst;
  auto& g = inst.graph;
  g.vertices = {{0, VertexKind::And}, {1, VertexKind::And}};
  g.edges = {{0, 0, 1, EdgeColor::Blue}, {1, 0, 1, EdgeColor::Red}, {2, 0, 1, EdgeColor::Red}};
  g.rotation = {{2, 1, 0}, {0, 1, 2}};
  // Blue into u, reds into v; target reverses every edge.
  inst.start.reversed = {true, false, false};
  inst.target.reversed = {false, true, true};
  return inst;
}

NclInstance k4_instance() {
  NclInstance inst;
  auto& g = inst.graph;
  for (int i = 0; i < 4; ++i) g.vertices.push_back({i, VertexKind::Or});
  g.edges = {{0, 0, 1, EdgeColor::Blue}, {1, 0, 2, EdgeColor::Blue},
             {2, 0, 3, EdgeColor::Blue}, {3, 1, 2, EdgeColor::Blue},
             {4, 1, 3, EdgeColor::Blue}, {5, 2, 3, EdgeColor::Blue}};
  g.rotation = {{0, 1, 2}, {3, 0, 4}, {5, 1, 3}, {4, 2, 5}};
  // Directed triangle 0->1->2->0 with 0->3, 3->1, 2->3; target reverses the
  // triangle. Both have in-degree >= 1 everywhere (blue counts double).
  inst.start.reversed = {false, true, false, false, true, false};
  inst.target.reversed = {true, false, false, false, true, false};
  if (!ncl::is_feasible(g, inst.start) || !ncl::is_feasible(g, inst.target))
    throw InternalError("k4 endpoints must be feasible");
  return inst;
}

std::vector<Orientation> feasible_orientations(const ncl::NclGraph& g) {
  int n = static_cast<int>(g.edges.size());
  if (n > 24) throw ResourceLimitError("too many edges to enumerate");
  std::vector<Orientation> out;
  for (std::uint64_t m = 0; m < (1ull << n); ++m) {
    Orientation o;
    o.reversed.resize(n);
    for (int i = 0; i < n; ++i) o.reversed[i] = (m >> i) & 1;
    if (ncl::is_feasible(g, o)) out.push_back(std::move(o));
  }
  return out;
}

namespace {

// Subdivide edges of two darts on a common face and join the new vertices by
// a blue edge drawn inside that face. Preserves cubicity, colors, planarity.
void expand(NclGraph& g, const Dart& d1, const Dart& d2) {
  int e1 = g.edge_index(d1.edge), e2 = g.edge_index(d2.edge);
  if (e1 == e2) throw InternalError("expansion requires distinct edges");
  int n = static_cast<int>(g.vertices.size());
  int m = static_cast<int>(g.edges.size());
  int w1 = n, w2 = n + 1;

  auto split = [&](int ei, int w, int fresh_id) {
    int old_v = g.edges[ei].v;
    int old_id = g.edges[ei].id;
    g.edges.push_back({fresh_id, w, old_v, g.edges[ei].color});
    g.edges[ei].v = w;  // (u, w) keeps its id
    int vi = g.vertex_index(old_v);
    for (int& x : g.rotation[vi])
      if (x == old_id) {
        x = fresh_id;
        break;
      }
    return old_v;
  };

  VertexKind k1 = g.edges[e1].color == EdgeColor::Blue ? VertexKind::Or : VertexKind::And;
  VertexKind k2 = g.edges[e2].color == EdgeColor::Blue ? VertexKind::Or : VertexKind::And;
  g.vertices.push_back({w1, k1});
  g.vertices.push_back({w2, k2});

  int id_e1b = m, id_e2b = m + 1, id_new = m + 2;
  int e1_id = g.edges[e1].id, e2_id = g.edges[e2].id;
  split(e1, w1, id_e1b);
  split(e2, w2, id_e2b);
  g.edges.push_back({id_new, w1, w2, EdgeColor::Blue});

  // New rotations: faces lie to the right of darts under our tracing, so a
  // forward dart wants the joining edge after the head-half, ccw.
  auto rot_for = [&](const Dart& d, int half_a_id, int half_b_id) {
    // half_a: toward the original tail u, half_b: toward the original head v.
    return d.forward ? std::vector<int>{half_b_id, half_a_id, id_new}
                     : std::vector<int>{half_b_id, id_new, half_a_id};
  };
  g.rotation.push_back(rot_for(d1, e1_id, id_e1b));
  g.rotation.push_back(rot_for(d2, e2_id, id_e2b));
}

}  // namespace

std::optional<NclInstance> random_instance(std::uint64_t seed, int max_edges) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ull + 0x100000001b3ull * attempt));
    NclGraph g = theta_instance().graph;
    while (static_cast<int>(g.edges.size()) + 3 <= max_edges) {
      if (std::uniform_int_distribution<int>(0, 3)(rng) == 0 && g.edges.size() > 3) break;
      auto faces = ncl::trace_faces(g);
      std::uniform_int_distribution<std::size_t> pick_face(0, faces.faces.size() - 1);
      const auto& walk = faces.faces[pick_face(rng)];
      std::vector<std::pair<Dart, Dart>> pairs;
      for (std::size_t i = 0; i < walk.size(); ++i)
        for (std::size_t j = i + 1; j < walk.size(); ++j)
          if (walk[i].edge != walk[j].edge) pairs.emplace_back(walk[i], walk[j]);
      if (pairs.empty()) break;
      auto [d1, d2] = pairs[std::uniform_int_distribution<std::size_t>(0, pairs.size() - 1)(rng)];
      NclGraph trial = g;
      expand(trial, d1, d2);
      // Keep the expansion only if the grown graph still has feasible
      // orientations; otherwise stop growing this attempt.
      if (feasible_orientations(trial).empty()) break;
      g = std::move(trial);
    }
    auto rep = ncl::validate_graph(g);
    if (!rep.ok()) throw InternalError("generator produced invalid graph: " + rep.violations[0]);
    auto feas = feasible_orientations(g);
    if (feas.size() < 2) continue;
    std::uniform_int_distribution<std::size_t> pick(0, feas.size() - 1);
    NclInstance inst;
    inst.graph = g;
    inst.start = feas[pick(rng)];
    inst.target = feas[pick(rng)];
    return inst;
  }
  return std::nullopt;
}

}  // namespace recon::gen
