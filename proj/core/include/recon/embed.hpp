#pragma once

#include <optional>
#include <string>
#include <vector>

#include "recon/sat.hpp"

namespace recon::embed {

/// Node numbering of the variable-clause incidence graph:
/// variables are nodes [0, V), clause k is node V + k.
struct IncidenceEdge {
  int var = 0;     // variable index (0-based)
  int clause = 0;  // clause index (0-based)
};

/// One crossing of the separating curve through a variable node.
/// Gaps index the corners of the node's rotation: gap i lies between
/// rotation[i] and rotation[(i+1) % deg], counterclockwise.
struct CurveStation {
  int var = 0;
  int entry_gap = 0;
  int exit_gap = 0;
};

struct SeparatingCurve {
  std::vector<CurveStation> stations;  // cyclic order
  std::string positive_side;           // "left" or "right" of travel, as recorded
};

/// Monotone formula plus a combinatorial planar embedding of its incidence
/// graph (rotation system) and, optionally, a separating curve.
struct EmbeddedFormula {
  sat::CnfFormula formula;
  std::vector<IncidenceEdge> edges;
  std::vector<std::vector<int>> rotation;  // per node, ccw list of edge indices
  std::optional<SeparatingCurve> curve;

  int node_count() const {
    return formula.variable_count + static_cast<int>(formula.clauses.size());
  }
  int clause_node(int clause) const { return formula.variable_count + clause; }
};

struct IncidenceFaces {
  // A dart is 2*edge + (towardClause ? 0 : 1).
  std::vector<std::vector<int>> faces;        // darts per face
  std::vector<int> face_of_dart;              // dart -> face
  std::vector<std::vector<int>> walk_pos;     // face -> positions align with faces[f]
  int face_of_gap(const EmbeddedFormula& ef, int node, int gap) const;
  int walk_pos_of_gap(const EmbeddedFormula& ef, int node, int gap) const;
};

int incidence_dart_code(const EmbeddedFormula& ef, int edge, bool toward_clause);

IncidenceFaces trace_incidence_faces(const EmbeddedFormula& ef);

/// Euler / consistency check of the rotation system. Returns diagnostics;
/// empty means the embedding is a valid planar rotation system.
std::vector<std::string> validate_embedding(const EmbeddedFormula& ef);

/// Full separating-curve check: visits every variable exactly once, stays in
/// faces, corridors pairwise non-crossing, and the all-positive clause nodes
/// end up strictly on one side with the all-negative ones on the other.
bool check_separating_curve(const EmbeddedFormula& ef, std::string* why = nullptr);

/// Side of each clause relative to the curve ("left"/"right" of travel).
/// Fails (nullopt) if any clause sees both sides.
std::optional<std::vector<std::string>> clause_sides(const EmbeddedFormula& ef);

// Formula file: DIMACS clause core readable by third-party tools, plus the
// embedding and curve in `c EXT <json>` comment lines.
std::string to_text(const EmbeddedFormula& ef,
                    const std::vector<sat::Assignment>& assignments = {});
EmbeddedFormula from_text(const std::string& text,
                          std::vector<sat::Assignment>* assignments = nullptr);
void save(const EmbeddedFormula& ef, const std::string& path,
          const std::vector<sat::Assignment>& assignments = {});
EmbeddedFormula load(const std::string& path,
                     std::vector<sat::Assignment>* assignments = nullptr);

}  // namespace recon::embed
