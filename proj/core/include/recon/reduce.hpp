#pragma once

#include <array>
#include <string>
#include <vector>

#include "recon/embed.hpp"
#include "recon/ncl.hpp"
#include "recon/sat.hpp"

namespace recon::reduce {

/// Every edge u-v of the source graph split at a fresh subdivision vertex.
/// Half 2i is the u-side of edge i, half 2i+1 the v-side. Subdivision vertex
/// of edge i has index n+i, after the n original vertices.
struct SubdividedGraph {
  int original_count = 0;
  int edge_count = 0;
  std::vector<ncl::VertexKind> kinds;            // original vertices only
  std::vector<std::vector<int>> rotation;        // per vertex (n + m rows), half ids ccw
  int vertex_count() const { return original_count + edge_count; }
  int half_count() const { return 2 * edge_count; }
};

SubdividedGraph subdivide(const ncl::NclGraph& g);

struct ReductionArtifacts {
  ncl::NclInstance instance;
  SubdividedGraph subdivided;
  embed::EmbeddedFormula embedded;
  sat::Assignment alpha;        // from instance.start
  sat::Assignment alpha_prime;  // from instance.target

  // Correspondence tables (indices into instance.graph / embedded.formula).
  std::vector<std::array<int, 2>> edge_vars;     // edge index -> {x_minus, x_plus} (0-based)
  std::vector<std::vector<int>> vertex_clauses;  // vertex index -> positive clause indices
  std::vector<int> edge_neg_clause;              // edge index -> negative clause index
};

/// Compile an NCL instance into an embedded monotone-planar reconfiguration
/// instance with separating curve and endpoint assignments.
ReductionArtifacts reduce(const ncl::NclInstance& inst);

sat::Assignment orientation_to_assignment(const ReductionArtifacts& arts,
                                          const ncl::Orientation& o);
ncl::Orientation assignment_to_orientation(const ReductionArtifacts& arts,
                                           const sat::Assignment& a);

/// Builds the separating curve by orienting dual edges (negative clause on the
/// left), linking each inbound dual edge to the following outbound one, and
/// gluing cycles at shared faces until a single closed curve remains.
embed::SeparatingCurve build_separating_curve(const embed::EmbeddedFormula& ef);

/// Expand each edge reversal into two single-variable flips through the
/// both-false intermediate; returns the assignment path (length 2k+1).
std::vector<sat::Assignment> lift_path(const ReductionArtifacts& arts,
                                       const std::vector<ncl::Orientation>& ncl_path);

/// Map each variable flip back to one edge reversal or a no-op.
std::vector<ncl::Orientation> project_path(const ReductionArtifacts& arts,
                                           const std::vector<sat::Assignment>& sat_path);

std::string mapping_to_json_text(const ReductionArtifacts& arts);

}  // namespace recon::reduce
