#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace recon::ncl {

enum class VertexKind { And, Or };
enum class EdgeColor { Blue, Red };

struct Vertex {
  int id = 0;
  VertexKind kind = VertexKind::Or;
};

// Base direction is u -> v.
struct Edge {
  int id = 0;
  int u = 0;
  int v = 0;
  EdgeColor color = EdgeColor::Blue;
};

// A dart is one of the two directed sides of an edge.
struct Dart {
  int edge = 0;
  bool forward = true;  // true: u -> v
};

inline bool operator==(const Dart& a, const Dart& b) {
  return a.edge == b.edge && a.forward == b.forward;
}

/// Colored cubic plane multigraph with an explicit rotation system.
/// `rotation[i]` lists the edge ids around `vertices[i]` in ccw order.
struct NclGraph {
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> rotation;
  int outer_face = 0;

  int vertex_index(int id) const;
  int edge_index(int id) const;
  int dart_head(const Dart& d) const { return d.forward ? edges[edge_index(d.edge)].v : edges[edge_index(d.edge)].u; }
  int dart_tail(const Dart& d) const { return d.forward ? edges[edge_index(d.edge)].u : edges[edge_index(d.edge)].v; }
};

/// Edge direction assignment; reversed[i] flips edges[i]'s base direction.
struct Orientation {
  std::vector<bool> reversed;
};

struct NclInstance {
  NclGraph graph;
  Orientation start;
  Orientation target;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Faces traced from the rotation system. Face i is a cyclic dart sequence;
// faces are numbered in order of their smallest dart.
struct FaceSet {
  std::vector<std::vector<Dart>> faces;
  // face_of[2*edgeIndex + (forward?0:1)] is the face containing that dart.
  std::vector<int> face_of;
};

FaceSet trace_faces(const NclGraph& g);

ValidationReport validate_graph(const NclGraph& g);

bool is_feasible(const NclGraph& g, const Orientation& o);

std::vector<Orientation> reversal_neighbors(const NclGraph& g, const Orientation& o);

/// Breadth-first search over feasible orientations, flipping one edge at a time.
bool reachable(const NclInstance& inst, int edge_cap = 20);

// JSON instance file round-trip (canonical form: sorted ids, sorted keys).
NclInstance load_instance(const std::string& path);
void save_instance(const NclInstance& inst, const std::string& path);
NclInstance instance_from_json_text(const std::string& text);
std::string instance_to_json_text(const NclInstance& inst);

}  // namespace recon::ncl
