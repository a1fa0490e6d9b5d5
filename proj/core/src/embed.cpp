#include "recon/embed.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "recon/errors.hpp"

namespace recon::embed {

using nlohmann::json;

int incidence_dart_code(const EmbeddedFormula&, int edge, bool toward_clause) {
  return 2 * edge + (toward_clause ? 0 : 1);
}

namespace {

int dart_head(const EmbeddedFormula& ef, int code) {
  const auto& e = ef.edges[code / 2];
  return (code % 2 == 0) ? ef.clause_node(e.clause) : e.var;
}

int dart_tail(const EmbeddedFormula& ef, int code) {
  const auto& e = ef.edges[code / 2];
  return (code % 2 == 0) ? e.var : ef.clause_node(e.clause);
}

int rotation_pos(const EmbeddedFormula& ef, int node, int edge) {
  const auto& rot = ef.rotation[node];
  for (std::size_t i = 0; i < rot.size(); ++i)
    if (rot[i] == edge) return static_cast<int>(i);
  return -1;
}

int face_next(const EmbeddedFormula& ef, int code) {
  int head = dart_head(ef, code);
  int pos = rotation_pos(ef, head, code / 2);
  if (pos < 0) throw InternalError("incidence rotation missing edge");
  const auto& rot = ef.rotation[head];
  int next_edge = rot[(pos + 1) % rot.size()];
  bool toward_clause = (ef.edges[next_edge].var == head);
  return incidence_dart_code(ef, next_edge, toward_clause);
}

}  // namespace

IncidenceFaces trace_incidence_faces(const EmbeddedFormula& ef) {
  IncidenceFaces fs;
  fs.face_of_dart.assign(2 * ef.edges.size(), -1);
  for (std::size_t d = 0; d < 2 * ef.edges.size(); ++d) {
    if (fs.face_of_dart[d] >= 0) continue;
    int fid = static_cast<int>(fs.faces.size());
    std::vector<int> walk;
    int cur = static_cast<int>(d);
    do {
      fs.face_of_dart[cur] = fid;
      walk.push_back(cur);
      cur = face_next(ef, cur);
      if (walk.size() > 4 * ef.edges.size() + 4) throw InternalError("incidence face walk stuck");
    } while (cur != static_cast<int>(d));
    fs.faces.push_back(std::move(walk));
  }
  return fs;
}

int IncidenceFaces::face_of_gap(const EmbeddedFormula& ef, int node, int gap) const {
  // Gap i at `node` is visited by the face walk arriving along rotation[i].
  int edge = ef.rotation[node][gap];
  bool toward_clause = (ef.clause_node(ef.edges[edge].clause) == node);
  return face_of_dart[incidence_dart_code(ef, edge, toward_clause)];
}

int IncidenceFaces::walk_pos_of_gap(const EmbeddedFormula& ef, int node, int gap) const {
  int edge = ef.rotation[node][gap];
  bool toward_clause = (ef.clause_node(ef.edges[edge].clause) == node);
  int code = incidence_dart_code(ef, edge, toward_clause);
  int f = face_of_dart[code];
  const auto& walk = faces[f];
  for (std::size_t i = 0; i < walk.size(); ++i)
    if (walk[i] == code) return static_cast<int>(i);
  throw InternalError("dart missing from its face walk");
}

std::vector<std::string> validate_embedding(const EmbeddedFormula& ef) {
  std::vector<std::string> out;
  sat::validate_formula(ef.formula);
  int n = ef.node_count();
  if (static_cast<int>(ef.rotation.size()) != n) {
    out.push_back("rotation table size mismatch");
    return out;
  }
  // Every incidence edge appears exactly once at each endpoint's rotation.
  std::vector<std::map<int, int>> counts(n);
  for (std::size_t e = 0; e < ef.edges.size(); ++e) {
    const auto& ie = ef.edges[e];
    if (ie.var < 0 || ie.var >= ef.formula.variable_count ||
        ie.clause < 0 || ie.clause >= static_cast<int>(ef.formula.clauses.size())) {
      out.push_back("incidence edge endpoint out of range");
      return out;
    }
  }
  for (int node = 0; node < n; ++node)
    for (int e : ef.rotation[node]) {
      if (e < 0 || e >= static_cast<int>(ef.edges.size())) {
        out.push_back("rotation references unknown incidence edge");
        return out;
      }
      counts[node][e]++;
    }
  for (std::size_t e = 0; e < ef.edges.size(); ++e) {
    int a = ef.edges[e].var, b = ef.clause_node(ef.edges[e].clause);
    if (counts[a][static_cast<int>(e)] != 1 || counts[b][static_cast<int>(e)] != 1)
      out.push_back("incidence edge " + std::to_string(e) + " misplaced in rotations");
  }
  if (!out.empty()) return out;

  if (!ef.edges.empty()) {
    IncidenceFaces fs = trace_incidence_faces(ef);
    long v = n, e = static_cast<long>(ef.edges.size()), f = static_cast<long>(fs.faces.size());
    if (v - e + f != 2)
      out.push_back("incidence rotation system not planar: V-E+F=" + std::to_string(v - e + f));
  }
  return out;
}

namespace {

struct SideSplit {
  std::vector<int> left_edges, right_edges;  // incidence edge ids at this node
};

// Split the rotation of `var` by the entry/exit gaps. Edges swept ccw from the
// entry gap to the exit gap lie to the right of travel; the rest to the left.
SideSplit split_sides(const EmbeddedFormula& ef, const CurveStation& st) {
  const auto& rot = ef.rotation[st.var];
  int d = static_cast<int>(rot.size());
  SideSplit s;
  int i = (st.entry_gap + 1) % d;
  while (true) {
    s.right_edges.push_back(rot[i]);
    if (i == st.exit_gap) break;
    i = (i + 1) % d;
  }
  i = (st.exit_gap + 1) % d;
  while (true) {
    s.left_edges.push_back(rot[i]);
    if (i == st.entry_gap) break;
    i = (i + 1) % d;
  }
  return s;
}

bool chords_cross(int a1, int b1, int a2, int b2, int len) {
  auto inside = [&](int x, int lo, int hi) {
    // strictly inside cyclic interval (lo, hi)
    if (lo < hi) return x > lo && x < hi;
    return x > lo || x < hi;
  };
  bool in2 = inside(a2, a1, b1);
  bool in2b = inside(b2, a1, b1);
  (void)len;
  return in2 != in2b;
}

}  // namespace

std::optional<std::vector<std::string>> clause_sides(const EmbeddedFormula& ef) {
  if (!ef.curve) return std::nullopt;
  int c = static_cast<int>(ef.formula.clauses.size());
  std::vector<std::string> side(c);
  for (const auto& st : ef.curve->stations) {
    SideSplit s = split_sides(ef, st);
    for (int e : s.left_edges) {
      int cl = ef.edges[e].clause;
      if (side[cl].empty())
        side[cl] = "left";
      else if (side[cl] != "left")
        return std::nullopt;
    }
    for (int e : s.right_edges) {
      int cl = ef.edges[e].clause;
      if (side[cl].empty())
        side[cl] = "right";
      else if (side[cl] != "right")
        return std::nullopt;
    }
  }
  for (const auto& s : side)
    if (s.empty()) return std::nullopt;  // clause untouched by any variable? impossible
  return side;
}

bool check_separating_curve(const EmbeddedFormula& ef, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (!ef.curve) throw ContractError("no separating curve present");
  if (!validate_embedding(ef).empty()) return fail("embedding invalid");
  const auto& stations = ef.curve->stations;
  if (stations.empty()) return fail("empty curve");

  // Every variable node exactly once.
  std::vector<int> seen(ef.formula.variable_count, 0);
  for (const auto& st : stations) {
    if (st.var < 0 || st.var >= ef.formula.variable_count) return fail("station var out of range");
    seen[st.var]++;
  }
  for (int v = 0; v < ef.formula.variable_count; ++v)
    if (seen[v] != 1) return fail("variable " + std::to_string(v) + " visited " +
                                  std::to_string(seen[v]) + " times");

  IncidenceFaces fs = trace_incidence_faces(ef);
  int m = static_cast<int>(stations.size());

  // Gap sanity and corridor face matching.
  for (int i = 0; i < m; ++i) {
    const auto& st = stations[i];
    int deg = static_cast<int>(ef.rotation[st.var].size());
    if (st.entry_gap < 0 || st.entry_gap >= deg || st.exit_gap < 0 || st.exit_gap >= deg)
      return fail("gap index out of range");
    if (st.entry_gap == st.exit_gap) return fail("degenerate station (entry == exit gap)");
    const auto& nxt = stations[(i + 1) % m];
    int f_out = fs.face_of_gap(ef, st.var, st.exit_gap);
    int f_in = fs.face_of_gap(ef, nxt.var, nxt.entry_gap);
    if (f_out != f_in) return fail("corridor " + std::to_string(i) + " spans two faces");
  }

  // Non-crossing corridors per face; chord endpoints must be distinct corners.
  std::map<int, std::vector<std::pair<int, int>>> chords;  // face -> (posA,posB)
  std::set<std::pair<int, int>> used;                      // (face, walk position)
  for (int i = 0; i < m; ++i) {
    const auto& st = stations[i];
    const auto& nxt = stations[(i + 1) % m];
    int f = fs.face_of_gap(ef, st.var, st.exit_gap);
    int pa = fs.walk_pos_of_gap(ef, st.var, st.exit_gap);
    int pb = fs.walk_pos_of_gap(ef, nxt.var, nxt.entry_gap);
    if (!used.insert({f, pa}).second) return fail("corner used twice");
    if (!used.insert({f, pb}).second) return fail("corner used twice");
    chords[f].push_back({pa, pb});
  }
  for (const auto& [f, list] : chords) {
    int len = static_cast<int>(fs.faces[f].size());
    for (std::size_t i = 0; i < list.size(); ++i)
      for (std::size_t j = i + 1; j < list.size(); ++j)
        if (chords_cross(list[i].first, list[i].second, list[j].first, list[j].second, len))
          return fail("corridors cross inside a face");
  }

  // Separation: uniform side per clause, positives on one side, negatives other.
  auto sides = clause_sides(ef);
  if (!sides) return fail("a clause node touches both sides");
  std::string pos_side, neg_side;
  for (std::size_t c = 0; c < ef.formula.clauses.size(); ++c) {
    bool pos = sat::clause_positive(ef.formula.clauses[c]);
    std::string& want = pos ? pos_side : neg_side;
    if (want.empty())
      want = (*sides)[c];
    else if (want != (*sides)[c])
      return fail(std::string(pos ? "positive" : "negative") + " clauses on both sides");
  }
  if (!pos_side.empty() && pos_side == neg_side)
    return fail("positive and negative clauses share a side");
  if (!ef.curve->positive_side.empty() && !pos_side.empty() &&
      ef.curve->positive_side != pos_side)
    return fail("recorded side label disagrees with derived side");
  return true;
}

std::string to_text(const EmbeddedFormula& ef, const std::vector<sat::Assignment>& assignments) {
  std::ostringstream os;
  os << sat::to_dimacs(ef.formula);
  json ext;
  json je = json::array();
  for (const auto& e : ef.edges) je.push_back(json{{"var", e.var}, {"clause", e.clause}});
  ext["edges"] = je;
  json jr = json::array();
  for (const auto& r : ef.rotation) jr.push_back(r);
  ext["rotation"] = jr;
  if (ef.curve) {
    json js = json::array();
    for (const auto& st : ef.curve->stations)
      js.push_back(json{{"var", st.var}, {"entry", st.entry_gap}, {"exit", st.exit_gap}});
    ext["curve"] = json{{"stations", js}, {"positive_side", ef.curve->positive_side}};
  }
  if (!assignments.empty()) {
    json ja = json::array();
    for (const auto& a : assignments) {
      std::string bits;
      for (bool b : a) bits += b ? '1' : '0';
      ja.push_back(bits);
    }
    ext["assignments"] = ja;
  }
  os << "c EXT " << ext.dump() << "\n";
  return os.str();
}

EmbeddedFormula from_text(const std::string& text, std::vector<sat::Assignment>* assignments) {
  EmbeddedFormula ef;
  ef.formula = sat::from_dimacs(text);
  std::istringstream is(text);
  std::string line;
  json ext;
  while (std::getline(is, line)) {
    if (line.rfind("c EXT ", 0) == 0) {
      ext = json::parse(line.substr(6));
      break;
    }
  }
  if (ext.is_null()) throw ContractError("formula file missing EXT block");
  for (const auto& je : ext.at("edges"))
    ef.edges.push_back({je.at("var").get<int>(), je.at("clause").get<int>()});
  for (const auto& jr : ext.at("rotation")) {
    std::vector<int> row;
    for (const auto& x : jr) row.push_back(x.get<int>());
    ef.rotation.push_back(std::move(row));
  }
  if (ext.contains("curve")) {
    SeparatingCurve c;
    for (const auto& js : ext["curve"].at("stations"))
      c.stations.push_back(
          {js.at("var").get<int>(), js.at("entry").get<int>(), js.at("exit").get<int>()});
    c.positive_side = ext["curve"].value("positive_side", "");
    ef.curve = c;
  }
  if (assignments && ext.contains("assignments")) {
    for (const auto& ja : ext["assignments"]) {
      std::string bits = ja.get<std::string>();
      sat::Assignment a;
      for (char ch : bits) a.push_back(ch == '1');
      assignments->push_back(a);
    }
  }
  return ef;
}

void save(const EmbeddedFormula& ef, const std::string& path,
          const std::vector<sat::Assignment>& assignments) {
  std::ofstream out(path);
  if (!out) throw ContractError("cannot open " + path);
  out << to_text(ef, assignments);
}

EmbeddedFormula load(const std::string& path, std::vector<sat::Assignment>* assignments) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str(), assignments);
}

}  // namespace recon::embed
