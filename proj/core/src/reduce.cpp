#include "recon/reduce.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "recon/errors.hpp"

namespace recon::reduce {

using embed::CurveStation;
using embed::EmbeddedFormula;
using embed::IncidenceFaces;
using embed::SeparatingCurve;
using ncl::EdgeColor;
using ncl::NclGraph;
using ncl::Orientation;
using ncl::VertexKind;

SubdividedGraph subdivide(const NclGraph& g) {
  auto rep = ncl::validate_graph(g);
  if (!rep.ok()) throw ContractError("invalid NCL graph: " + rep.violations.front());
  SubdividedGraph s;
  s.original_count = static_cast<int>(g.vertices.size());
  s.edge_count = static_cast<int>(g.edges.size());
  for (const auto& v : g.vertices) s.kinds.push_back(v.kind);
  s.rotation.resize(s.vertex_count());
  for (int vi = 0; vi < s.original_count; ++vi) {
    const auto& v = g.vertices[vi];
    for (int eid : g.rotation[vi]) {
      int ei = g.edge_index(eid);
      bool at_tail = g.edges[ei].u == v.id;
      s.rotation[vi].push_back(2 * ei + (at_tail ? 0 : 1));
    }
  }
  for (int ei = 0; ei < s.edge_count; ++ei)
    s.rotation[s.original_count + ei] = {2 * ei, 2 * ei + 1};
  return s;
}

namespace {

// Variable indexing: x_{e-} at 2i, x_{e+} at 2i+1 for edge position i.
int var_minus(int ei) { return 2 * ei; }
int var_plus(int ei) { return 2 * ei + 1; }

// Variable whose node sits at vertex `vid` end of edge `ei`.
int near_var(const NclGraph& g, int ei, int vid) {
  return g.edges[ei].u == vid ? var_minus(ei) : var_plus(ei);
}

}  // namespace

ReductionArtifacts reduce(const ncl::NclInstance& inst) {
  const NclGraph& g = inst.graph;
  auto rep = ncl::validate_graph(g);
  if (!rep.ok()) throw ContractError("invalid NCL instance: " + rep.violations.front());
  if (!ncl::is_feasible(g, inst.start) || !ncl::is_feasible(g, inst.target))
    throw ContractError("instance endpoints must be feasible");

  ReductionArtifacts arts;
  arts.instance = inst;
  arts.subdivided = subdivide(g);

  const int m = static_cast<int>(g.edges.size());
  EmbeddedFormula& ef = arts.embedded;
  ef.formula.variable_count = 2 * m;
  arts.edge_vars.resize(m);
  for (int ei = 0; ei < m; ++ei) arts.edge_vars[ei] = {var_minus(ei), var_plus(ei)};

  // Positive clauses per vertex (vertex id order), then negative per edge.
  arts.vertex_clauses.resize(g.vertices.size());
  std::vector<std::vector<int>> clause_vars;  // clause index -> member variables
  for (std::size_t vi = 0; vi < g.vertices.size(); ++vi) {
    const auto& v = g.vertices[vi];
    if (v.kind == VertexKind::Or) {
      std::vector<int> lits, vars;
      for (int eid : g.rotation[vi]) {
        int ei = g.edge_index(eid);
        vars.push_back(near_var(g, ei, v.id));
        lits.push_back(near_var(g, ei, v.id) + 1);
      }
      arts.vertex_clauses[vi].push_back(static_cast<int>(ef.formula.clauses.size()));
      ef.formula.clauses.push_back(lits);
      clause_vars.push_back(vars);
    } else {
      int blue = -1;
      std::vector<int> reds;
      for (const auto& e : g.edges) {
        int mult = (e.u == v.id) + (e.v == v.id);
        for (int k = 0; k < mult; ++k) {
          int ei = g.edge_index(e.id);
          if (e.color == EdgeColor::Blue)
            blue = ei;
          else
            reds.push_back(ei);
        }
      }
      std::sort(reds.begin(), reds.end());
      int bv = near_var(g, blue, v.id);
      for (int red : reds) {
        int rv = near_var(g, red, v.id);
        arts.vertex_clauses[vi].push_back(static_cast<int>(ef.formula.clauses.size()));
        ef.formula.clauses.push_back({bv + 1, rv + 1});
        clause_vars.push_back({bv, rv});
      }
    }
  }
  arts.edge_neg_clause.resize(m);
  for (int ei = 0; ei < m; ++ei) {
    arts.edge_neg_clause[ei] = static_cast<int>(ef.formula.clauses.size());
    ef.formula.clauses.push_back({-(var_plus(ei) + 1), -(var_minus(ei) + 1)});
    clause_vars.push_back({var_plus(ei), var_minus(ei)});
  }

  // Incidence edges; record per (variable, clause) the incidence index.
  std::map<std::pair<int, int>, int> inc;
  auto incidence = [&](int var, int clause) {
    auto key = std::make_pair(var, clause);
    auto it = inc.find(key);
    if (it != inc.end()) return it->second;
    int idx = static_cast<int>(ef.edges.size());
    ef.edges.push_back({var, clause});
    inc[key] = idx;
    return idx;
  };
  for (std::size_t c = 0; c < clause_vars.size(); ++c)
    for (int v : clause_vars[c]) incidence(v, static_cast<int>(c));

  // Rotations. Variable node x at edge ei, near vertex w: ccw order is
  // [toward negative clause, toward positive clause(s)]. For the blue edge of
  // an AND vertex the ccw order after the negative edge is: first the clause
  // of the red edge that follows blue ccw at w, then the other clause.
  ef.rotation.assign(ef.node_count(), {});
  for (int ei = 0; ei < m; ++ei) {
    for (int side = 0; side < 2; ++side) {
      int var = side == 0 ? var_minus(ei) : var_plus(ei);
      int w = side == 0 ? g.edges[ei].u : g.edges[ei].v;
      int wi = g.vertex_index(w);
      int neg = arts.edge_neg_clause[ei];
      std::vector<int>& rot = ef.rotation[var];
      rot.push_back(incidence(var, neg));
      if (g.vertices[wi].kind == VertexKind::Or) {
        rot.push_back(incidence(var, arts.vertex_clauses[wi][0]));
      } else if (g.edges[ei].color == EdgeColor::Red) {
        for (int c : arts.vertex_clauses[wi]) {
          const auto& lits = ef.formula.clauses[c];
          if (std::abs(lits[1]) - 1 == var) rot.push_back(incidence(var, c));
        }
      } else {
        // Blue at AND: find the red edge following blue in ccw rotation at w.
        const auto& wrot = g.rotation[wi];
        int pos = -1;
        for (std::size_t i = 0; i < wrot.size(); ++i)
          if (g.edge_index(wrot[i]) == ei) pos = static_cast<int>(i);
        int follow_red = g.edge_index(wrot[(pos + 1) % wrot.size()]);
        int c_follow = -1, c_other = -1;
        for (int c : arts.vertex_clauses[wi]) {
          int red_var = std::abs(ef.formula.clauses[c][1]) - 1;
          if (red_var == near_var(g, follow_red, w))
            c_follow = c;
          else
            c_other = c;
        }
        if (c_follow < 0 || c_other < 0) throw InternalError("AND clause lookup failed");
        rot.push_back(incidence(var, c_follow));
        rot.push_back(incidence(var, c_other));
      }
    }
  }
  // Clause node rotations.
  for (std::size_t vi = 0; vi < g.vertices.size(); ++vi) {
    const auto& v = g.vertices[vi];
    if (v.kind == VertexKind::Or) {
      int c = arts.vertex_clauses[vi][0];
      for (int eid : g.rotation[vi]) {
        int ei = g.edge_index(eid);
        ef.rotation[ef.clause_node(c)].push_back(incidence(near_var(g, ei, v.id), c));
      }
    } else {
      for (int c : arts.vertex_clauses[vi]) {
        int bv = std::abs(ef.formula.clauses[c][0]) - 1;
        int rv = std::abs(ef.formula.clauses[c][1]) - 1;
        ef.rotation[ef.clause_node(c)] = {incidence(bv, c), incidence(rv, c)};
      }
    }
  }
  for (int ei = 0; ei < m; ++ei) {
    int c = arts.edge_neg_clause[ei];
    ef.rotation[ef.clause_node(c)] = {incidence(var_minus(ei), c), incidence(var_plus(ei), c)};
  }

  auto diag = embed::validate_embedding(ef);
  if (!diag.empty()) throw InternalError("reduction embedding invalid: " + diag.front());

  ef.curve = build_separating_curve(ef);
  arts.alpha = orientation_to_assignment(arts, inst.start);
  arts.alpha_prime = orientation_to_assignment(arts, inst.target);
  return arts;
}

sat::Assignment orientation_to_assignment(const ReductionArtifacts& arts, const Orientation& o) {
  const auto& g = arts.instance.graph;
  if (o.reversed.size() != g.edges.size()) throw ContractError("orientation size mismatch");
  sat::Assignment a(arts.embedded.formula.variable_count, false);
  for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
    if (o.reversed[ei])
      a[arts.edge_vars[ei][0]] = true;  // x_{e-}
    else
      a[arts.edge_vars[ei][1]] = true;  // x_{e+}
  }
  return a;
}

ncl::Orientation assignment_to_orientation(const ReductionArtifacts& arts,
                                           const sat::Assignment& a) {
  const auto& g = arts.instance.graph;
  Orientation o;
  o.reversed.assign(g.edges.size(), false);
  for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
    bool minus = a[arts.edge_vars[ei][0]];
    bool plus = a[arts.edge_vars[ei][1]];
    if (minus && plus)
      throw ContractError("both variables of edge " + std::to_string(g.edges[ei].id) +
                          " are true");
    o.reversed[ei] = minus;  // both false: keep base direction
  }
  return o;
}

namespace {

struct Station {
  int var;
  int entry_gap;
  int exit_gap;
};

}  // namespace

SeparatingCurve build_separating_curve(const EmbeddedFormula& ef) {
  const int nvars = ef.formula.variable_count;
  if (nvars == 0) throw ContractError("formula has no variables");
  IncidenceFaces fs = embed::trace_incidence_faces(ef);

  // One station per variable: enter at the gap after its negative-clause edge
  // (ccw), exit at the gap before it. This keeps the negative clause on the
  // left of the traversal.
  std::vector<Station> st(nvars);
  for (int v = 0; v < nvars; ++v) {
    const auto& rot = ef.rotation[v];
    int d = static_cast<int>(rot.size());
    int neg_pos = -1;
    for (int i = 0; i < d; ++i) {
      int c = ef.edges[rot[i]].clause;
      if (!sat::clause_positive(ef.formula.clauses[c])) {
        if (neg_pos >= 0) throw InternalError("variable with two negative clauses");
        neg_pos = i;
      }
    }
    if (neg_pos < 0) throw InternalError("variable without negative clause");
    st[v] = {v, neg_pos, (neg_pos - 1 + d) % d};
  }

  // Events per face in boundary-walk order. An exit gap of v on face f means
  // the curve arrives into f after crossing v; an entry gap means it leaves f.
  struct Event {
    int pos;
    bool arrives;  // true: curve arrives into this face here (exit gap)
    int var;
  };
  std::map<int, std::vector<Event>> events;
  for (int v = 0; v < nvars; ++v) {
    int f_in = fs.face_of_gap(ef, v, st[v].entry_gap);
    int f_out = fs.face_of_gap(ef, v, st[v].exit_gap);
    events[f_in].push_back({fs.walk_pos_of_gap(ef, v, st[v].entry_gap), false, v});
    events[f_out].push_back({fs.walk_pos_of_gap(ef, v, st[v].exit_gap), true, v});
  }
  for (auto& [f, ev] : events) {
    std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) { return a.pos < b.pos; });
    for (std::size_t i = 0; i < ev.size(); ++i)
      if (ev[i].arrives == ev[(i + 1) % ev.size()].arrives)
        throw InternalError("face events do not alternate");
  }

  // next_var[v] = variable whose station follows v's on the curve. Initially
  // pair each arrival with the next event along the walk (an exit).
  std::vector<int> next_var(nvars, -1);
  // Per face, transitions as (arrivalEventIdx -> departureEventIdx).
  std::map<int, std::vector<std::pair<int, int>>> trans;
  for (auto& [f, ev] : events) {
    int k = static_cast<int>(ev.size());
    for (int i = 0; i < k; ++i) {
      if (!ev[i].arrives) continue;
      int j = (i + 1) % k;
      next_var[ev[i].var] = ev[j].var;
      trans[f].push_back({i, j});
    }
  }

  auto cycle_ids = [&]() {
    std::vector<int> cid(nvars, -1);
    int c = 0;
    for (int v = 0; v < nvars; ++v) {
      if (cid[v] >= 0) continue;
      int x = v;
      while (cid[x] < 0) {
        cid[x] = c;
        x = next_var[x];
      }
      ++c;
    }
    return std::make_pair(cid, c);
  };

  // Glue cycles: at a face where two different cycles own transitions whose
  // chord endpoints are walk-adjacent, swap the departures.
  while (true) {
    auto [cid, count] = cycle_ids();
    if (count <= 1) break;
    bool glued = false;
    for (auto& [f, ev] : events) {
      auto& tr = trans[f];
      int k = static_cast<int>(ev.size());
      // Find a departure event at position p and an arrival at p+1 (cyclic)
      // whose transitions belong to different cycles.
      for (int p = 0; p < k && !glued; ++p) {
        int q = (p + 1) % k;
        if (ev[p].arrives || !ev[q].arrives) continue;
        int ta = -1, tb = -1;
        for (std::size_t t = 0; t < tr.size(); ++t) {
          if (tr[t].second == p) ta = static_cast<int>(t);
          if (tr[t].first == q) tb = static_cast<int>(t);
        }
        if (ta < 0 || tb < 0) throw InternalError("transition bookkeeping broken");
        int va = ev[tr[ta].first].var;  // arrival var of transition ending at p
        int vb = ev[tr[tb].first].var;  // arrival var of transition starting at q
        if (cid[va] == cid[vb]) continue;
        // Swap departures: va now exits at tr[tb]'s departure and vice versa.
        std::swap(tr[ta].second, tr[tb].second);
        next_var[va] = ev[tr[ta].second].var;
        next_var[vb] = ev[tr[tb].second].var;
        glued = true;
      }
      if (glued) break;
    }
    if (!glued) throw InternalError("curve gluing stalled with multiple cycles");
  }

  // Emit stations starting from variable 0 along the cycle.
  SeparatingCurve curve;
  int v = 0;
  do {
    curve.stations.push_back({st[v].var, st[v].entry_gap, st[v].exit_gap});
    v = next_var[v];
  } while (v != 0);
  if (curve.stations.size() != static_cast<std::size_t>(nvars))
    throw InternalError("curve does not visit every variable");

  EmbeddedFormula probe = ef;
  probe.curve = curve;
  auto sides = embed::clause_sides(probe);
  if (!sides) throw InternalError("curve construction produced inconsistent sides");
  for (std::size_t c = 0; c < ef.formula.clauses.size(); ++c)
    if (sat::clause_positive(ef.formula.clauses[c])) {
      curve.positive_side = (*sides)[c];
      break;
    }
  return curve;
}

std::vector<sat::Assignment> lift_path(const ReductionArtifacts& arts,
                                       const std::vector<Orientation>& ncl_path) {
  std::vector<sat::Assignment> out;
  if (ncl_path.empty()) return out;
  const auto& g = arts.instance.graph;
  for (std::size_t i = 0; i < ncl_path.size(); ++i) {
    if (!ncl::is_feasible(g, ncl_path[i]))
      throw ContractError("infeasible orientation at step " + std::to_string(i));
    if (i == 0) {
      out.push_back(orientation_to_assignment(arts, ncl_path[0]));
      continue;
    }
    std::vector<int> flipped;
    for (std::size_t e = 0; e < g.edges.size(); ++e)
      if (ncl_path[i - 1].reversed[e] != ncl_path[i].reversed[e])
        flipped.push_back(static_cast<int>(e));
    if (flipped.size() != 1)
      throw ContractError("path step " + std::to_string(i) + " flips " +
                          std::to_string(flipped.size()) + " edges");
    int e = flipped[0];
    sat::Assignment mid = out.back();
    mid[arts.edge_vars[e][0]] = false;
    mid[arts.edge_vars[e][1]] = false;
    out.push_back(mid);
    out.push_back(orientation_to_assignment(arts, ncl_path[i]));
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    if (!sat::satisfies(arts.embedded.formula, out[i]))
      throw InternalError("lifted path leaves satisfying set at step " + std::to_string(i));
  return out;
}

std::vector<Orientation> project_path(const ReductionArtifacts& arts,
                                      const std::vector<sat::Assignment>& sat_path) {
  std::vector<Orientation> out;
  const auto& g = arts.instance.graph;
  for (std::size_t i = 0; i < sat_path.size(); ++i) {
    if (!sat::satisfies(arts.embedded.formula, sat_path[i]))
      throw ContractError("unsatisfying assignment at step " + std::to_string(i));
    Orientation o = assignment_to_orientation(arts, sat_path[i]);
    if (!ncl::is_feasible(g, o))
      throw InternalError("projected orientation infeasible at step " + std::to_string(i));
    if (out.empty() || o.reversed != out.back().reversed) out.push_back(o);
  }
  return out;
}

std::string mapping_to_json_text(const ReductionArtifacts& arts) {
  using nlohmann::json;
  const auto& g = arts.instance.graph;
  json edges = json::array();
  for (std::size_t ei = 0; ei < g.edges.size(); ++ei)
    edges.push_back(json{{"edge", g.edges[ei].id},
                         {"x_minus", arts.edge_vars[ei][0] + 1},
                         {"x_plus", arts.edge_vars[ei][1] + 1},
                         {"negative_clause", arts.edge_neg_clause[ei]}});
  json verts = json::array();
  for (std::size_t vi = 0; vi < g.vertices.size(); ++vi)
    verts.push_back(json{{"vertex", g.vertices[vi].id}, {"clauses", arts.vertex_clauses[vi]}});
  json root{{"edges", edges}, {"vertices", verts}};
  return root.dump(2) + "\n";
}

}  // namespace recon::reduce
