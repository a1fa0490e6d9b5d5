#include "recon/ncl.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

#include "recon/errors.hpp"

namespace recon::ncl {

using nlohmann::json;

int NclGraph::vertex_index(int id) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i].id == id) return static_cast<int>(i);
  throw ContractError("unknown vertex id " + std::to_string(id));
}

int NclGraph::edge_index(int id) const {
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].id == id) return static_cast<int>(i);
  throw ContractError("unknown edge id " + std::to_string(id));
}

namespace {

int dart_code(const NclGraph& g, const Dart& d) {
  return 2 * g.edge_index(d.edge) + (d.forward ? 0 : 1);
}

// Position of edge `e` in the rotation of vertex index `vi`. With multi-edges
// an edge appears once per endpoint; loops are rejected by validation.
int rotation_pos(const NclGraph& g, int vi, int e) {
  const auto& rot = g.rotation[vi];
  for (std::size_t i = 0; i < rot.size(); ++i)
    if (rot[i] == e) return static_cast<int>(i);
  return -1;
}

// Next dart of the face walk: arrive at head(d), leave along the ccw-next edge.
Dart face_next(const NclGraph& g, const Dart& d) {
  int head = g.dart_head(d);
  int vi = g.vertex_index(head);
  int pos = rotation_pos(g, vi, d.edge);
  if (pos < 0) throw InternalError("rotation missing edge");
  const auto& rot = g.rotation[vi];
  int next_edge = rot[(pos + 1) % rot.size()];
  const Edge& ne = g.edges[g.edge_index(next_edge)];
  return Dart{next_edge, ne.u == head};
}

}  // namespace

FaceSet trace_faces(const NclGraph& g) {
  FaceSet fs;
  fs.face_of.assign(2 * g.edges.size(), -1);
  for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
    for (int fwd = 0; fwd < 2; ++fwd) {
      Dart d{g.edges[ei].id, fwd == 0};
      if (fs.face_of[dart_code(g, d)] >= 0) continue;
      int face_id = static_cast<int>(fs.faces.size());
      std::vector<Dart> walk;
      Dart cur = d;
      do {
        fs.face_of[dart_code(g, cur)] = face_id;
        walk.push_back(cur);
        cur = face_next(g, cur);
        if (walk.size() > 4 * g.edges.size() + 4)
          throw InternalError("face trace does not close");
      } while (!(cur == d));
      fs.faces.push_back(std::move(walk));
    }
  }
  return fs;
}

ValidationReport validate_graph(const NclGraph& g) {
  ValidationReport rep;
  auto add = [&](const std::string& s) { rep.violations.push_back(s); };

  if (g.rotation.size() != g.vertices.size())
    add("rotation table size differs from vertex count");

  std::set<int> vids, eids;
  for (const auto& v : g.vertices)
    if (!vids.insert(v.id).second) add("duplicate vertex id " + std::to_string(v.id));
  for (const auto& e : g.edges) {
    if (!eids.insert(e.id).second) add("duplicate edge id " + std::to_string(e.id));
    if (e.u == e.v) add("loop edge " + std::to_string(e.id) + " rejected");
    if (!vids.count(e.u) || !vids.count(e.v))
      add("edge " + std::to_string(e.id) + " references unknown vertex");
  }
  if (!rep.ok()) return rep;

  // Degree and color pattern.
  for (std::size_t vi = 0; vi < g.vertices.size(); ++vi) {
    const auto& v = g.vertices[vi];
    int deg = 0, blue = 0, red = 0;
    for (const auto& e : g.edges) {
      int mult = (e.u == v.id) + (e.v == v.id);
      deg += mult;
      (e.color == EdgeColor::Blue ? blue : red) += mult;
    }
    if (deg != 3) add("vertex " + std::to_string(v.id) + " has degree " + std::to_string(deg));
    if (v.kind == VertexKind::Or && blue != 3)
      add("OR vertex " + std::to_string(v.id) + " must have three blue edges");
    if (v.kind == VertexKind::And && !(blue == 1 && red == 2))
      add("AND vertex " + std::to_string(v.id) + " must have one blue and two red edges");
  }

  // Rotation consistency: each vertex's rotation lists exactly its incident edges.
  for (std::size_t vi = 0; vi < g.vertices.size() && vi < g.rotation.size(); ++vi) {
    const auto& v = g.vertices[vi];
    std::multiset<int> want, have;
    for (const auto& e : g.edges) {
      if (e.u == v.id) want.insert(e.id);
      if (e.v == v.id) want.insert(e.id);
    }
    for (int e : g.rotation[vi]) have.insert(e);
    if (want != have)
      add("rotation at vertex " + std::to_string(v.id) + " does not list incident edges");
  }
  if (!rep.ok()) return rep;

  // Connectivity.
  if (!g.vertices.empty() && !g.edges.empty()) {
    std::map<int, std::vector<int>> adj;
    for (const auto& e : g.edges) {
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
    std::set<int> seen;
    std::queue<int> q;
    q.push(g.vertices[0].id);
    seen.insert(g.vertices[0].id);
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (int y : adj[x])
        if (seen.insert(y).second) q.push(y);
    }
    if (seen.size() != g.vertices.size()) add("graph is not connected");
  }
  if (!rep.ok()) return rep;

  // Euler check V - E + F = 2 on the derived face set.
  if (!g.edges.empty()) {
    FaceSet fs = trace_faces(g);
    long v = static_cast<long>(g.vertices.size());
    long e = static_cast<long>(g.edges.size());
    long f = static_cast<long>(fs.faces.size());
    if (v - e + f != 2)
      add("rotation system is not planar: V-E+F = " + std::to_string(v - e + f));
    if (g.outer_face < 0 || g.outer_face >= f)
      add("outer face id out of range");
  }
  return rep;
}

bool is_feasible(const NclGraph& g, const Orientation& o) {
  if (o.reversed.size() != g.edges.size())
    throw ContractError("orientation does not cover the edge set");
  std::map<int, int> in_weight;
  for (const auto& v : g.vertices) in_weight[v.id] = 0;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const Edge& e = g.edges[i];
    int head = o.reversed[i] ? e.u : e.v;
    in_weight[head] += (e.color == EdgeColor::Blue) ? 2 : 1;
  }
  for (const auto& [vid, w] : in_weight)
    if (w < 2) return false;
  return true;
}

std::vector<Orientation> reversal_neighbors(const NclGraph& g, const Orientation& o) {
  if (!is_feasible(g, o)) throw ContractError("input orientation is infeasible");
  std::vector<Orientation> out;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    Orientation n = o;
    n.reversed[i] = !n.reversed[i];
    if (is_feasible(g, n)) out.push_back(std::move(n));
  }
  return out;
}

namespace {

std::uint64_t mask_of(const Orientation& o) {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < o.reversed.size(); ++i)
    if (o.reversed[i]) m |= (1ull << i);
  return m;
}

Orientation orientation_of(std::uint64_t m, std::size_t n) {
  Orientation o;
  o.reversed.resize(n);
  for (std::size_t i = 0; i < n; ++i) o.reversed[i] = (m >> i) & 1;
  return o;
}

}  // namespace

bool reachable(const NclInstance& inst, int edge_cap) {
  const auto& g = inst.graph;
  int n = static_cast<int>(g.edges.size());
  if (n > edge_cap)
    throw ResourceLimitError("edge count " + std::to_string(n) + " exceeds cap " +
                             std::to_string(edge_cap));
  if (!is_feasible(g, inst.start) || !is_feasible(g, inst.target))
    throw ContractError("endpoints must be feasible orientations");

  std::uint64_t s = mask_of(inst.start), t = mask_of(inst.target);
  if (s == t) return true;
  std::vector<bool> seen(1ull << n, false);
  std::queue<std::uint64_t> q;
  seen[s] = true;
  q.push(s);
  while (!q.empty()) {
    std::uint64_t cur = q.front();
    q.pop();
    for (int i = 0; i < n; ++i) {
      std::uint64_t nxt = cur ^ (1ull << i);
      if (seen[nxt]) continue;
      if (!is_feasible(g, orientation_of(nxt, n))) continue;
      if (nxt == t) return true;
      seen[nxt] = true;
      q.push(nxt);
    }
  }
  return false;
}

namespace {

json orientation_to_json(const NclGraph& g, const Orientation& o) {
  std::vector<int> rev;
  for (std::size_t i = 0; i < o.reversed.size(); ++i)
    if (o.reversed[i]) rev.push_back(g.edges[i].id);
  std::sort(rev.begin(), rev.end());
  return json{{"reversed", rev}};
}

Orientation orientation_from_json(const NclGraph& g, const json& j) {
  Orientation o;
  o.reversed.assign(g.edges.size(), false);
  for (int id : j.at("reversed")) o.reversed[g.edge_index(id)] = true;
  return o;
}

}  // namespace

std::string instance_to_json_text(const NclInstance& inst) {
  const auto& g = inst.graph;
  json jv = json::array();
  for (const auto& v : g.vertices)
    jv.push_back(json{{"id", v.id}, {"kind", v.kind == VertexKind::And ? "and" : "or"}});
  json je = json::array();
  for (const auto& e : g.edges)
    je.push_back(json{{"id", e.id},
                      {"u", e.u},
                      {"v", e.v},
                      {"color", e.color == EdgeColor::Blue ? "blue" : "red"}});
  json jr = json::array();
  for (const auto& rot : g.rotation) jr.push_back(rot);
  json root{{"vertices", jv},
            {"edges", je},
            {"rotation", jr},
            {"outer_face", g.outer_face},
            {"start", orientation_to_json(g, inst.start)},
            {"target", orientation_to_json(g, inst.target)}};
  return root.dump(2) + "\n";
}

NclInstance instance_from_json_text(const std::string& text) {
  json root = json::parse(text);
  NclInstance inst;
  auto& g = inst.graph;
  std::vector<std::pair<Vertex, std::vector<int>>> rows;
  const auto& jvs = root.at("vertices");
  const auto& jr = root.at("rotation");
  if (jr.size() != jvs.size()) throw ContractError("rotation row count mismatch");
  for (std::size_t i = 0; i < jvs.size(); ++i) {
    Vertex v;
    v.id = jvs[i].at("id").get<int>();
    std::string k = jvs[i].at("kind").get<std::string>();
    if (k == "and")
      v.kind = VertexKind::And;
    else if (k == "or")
      v.kind = VertexKind::Or;
    else
      throw ContractError("vertex kind must be 'and' or 'or'");
    std::vector<int> rot;
    for (const auto& e : jr[i]) rot.push_back(e.get<int>());
    rows.emplace_back(v, std::move(rot));
  }
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first.id < b.first.id; });
  for (auto& [v, rot] : rows) {
    g.vertices.push_back(v);
    g.rotation.push_back(std::move(rot));
  }
  for (const auto& je : root.at("edges")) {
    Edge e;
    e.id = je.at("id").get<int>();
    e.u = je.at("u").get<int>();
    e.v = je.at("v").get<int>();
    std::string c = je.at("color").get<std::string>();
    if (c == "blue")
      e.color = EdgeColor::Blue;
    else if (c == "red")
      e.color = EdgeColor::Red;
    else
      throw ContractError("edge color must be 'blue' or 'red'");
    g.edges.push_back(e);
  }
  std::sort(g.edges.begin(), g.edges.end(), [](const Edge& a, const Edge& b) { return a.id < b.id; });
  g.outer_face = root.value("outer_face", 0);
  inst.start = orientation_from_json(g, root.at("start"));
  inst.target = orientation_from_json(g, root.at("target"));
  return inst;
}

NclInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return instance_from_json_text(ss.str());
}

void save_instance(const NclInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ContractError("cannot open " + path);
  out << instance_to_json_text(inst);
}

}  // namespace recon::ncl
