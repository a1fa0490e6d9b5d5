#include "recon/layout.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "json.hpp"

#include "recon/errors.hpp"

namespace recon::layout {

using nlohmann::json;
using sat::CnfFormula;

int ExpandedFormula::aux_index(int clause, int member) const {
  for (std::size_t i = 0; i < aux.size(); ++i)
    if (aux[i].clause == clause && aux[i].member == member)
      return base.variable_count + static_cast<int>(i);
  throw ContractError("unknown aux variable");
}

ExpandedFormula expand_aux_variables(const CnfFormula& base) {
  sat::validate_formula(base);
  if (!sat::check_monotone(base)) throw ContractError("formula must be monotone");
  ExpandedFormula xf;
  xf.base = base;
  xf.full.variable_count = base.variable_count;
  xf.clause_aux.resize(base.clauses.size());
  xf.implication_of.resize(base.clauses.size());
  xf.or_clause_of.resize(base.clauses.size(), -1);
  for (std::size_t c = 0; c < base.clauses.size(); ++c) {
    bool pos = sat::clause_positive(base.clauses[c]);
    std::vector<int> ors;
    for (std::size_t m = 0; m < base.clauses[c].size(); ++m) {
      int x = std::abs(base.clauses[c][m]);  // 1-based base variable
      int y = ++xf.full.variable_count;      // fresh aux, 1-based
      xf.aux.push_back({static_cast<int>(c), static_cast<int>(m), x - 1});
      xf.clause_aux[c].push_back(y - 1);
      xf.implication_of[c].push_back(static_cast<int>(xf.full.clauses.size()));
      if (pos) {
        xf.full.clauses.push_back({-y, x});  // y => x
        ors.push_back(y);
      } else {
        xf.full.clauses.push_back({y, -x});  // -y => -x
        ors.push_back(-y);
      }
    }
    xf.or_clause_of[c] = static_cast<int>(xf.full.clauses.size());
    xf.full.clauses.push_back(ors);
  }
  return xf;
}

sat::Assignment lift_assignment(const ExpandedFormula& xf, const sat::Assignment& base) {
  if (static_cast<int>(base.size()) != xf.base.variable_count)
    throw ContractError("assignment length mismatch");
  sat::Assignment a(xf.full.variable_count, false);
  for (int i = 0; i < xf.base.variable_count; ++i) a[i] = base[i];
  for (std::size_t i = 0; i < xf.aux.size(); ++i)
    a[xf.base.variable_count + i] = base[xf.aux[i].base_var];
  return a;
}

int SegmentRepresentation::primary_row(int position) const {
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].kind == RowKind::Primary && rows[i].member == position)
      return static_cast<int>(i);
  throw ContractError("no primary row at position " + std::to_string(position));
}

int SegmentRepresentation::row_at(RowKind kind, int clause, int member) const {
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].kind == kind && rows[i].clause == clause &&
        (kind == RowKind::OrSegment || rows[i].member == member))
      return static_cast<int>(i);
  throw ContractError("row lookup failed");
}

namespace {

struct ClauseGeom {
  int id = 0;
  bool positive = true;
  std::vector<int> member_pos;  // stack position per member, ascending
  int lo() const { return member_pos.front(); }
  int hi() const { return member_pos.back(); }
  int depth = 0;
  int band = 0;  // 1-based distance from the primary stack
};

// Laminar nesting forest by span containment; ties resolved by clause id so
// equal spans nest deterministically.
void assign_depths_and_bands(std::vector<ClauseGeom*>& cs) {
  std::sort(cs.begin(), cs.end(), [](const ClauseGeom* a, const ClauseGeom* b) {
    if (a->lo() != b->lo()) return a->lo() < b->lo();
    if (a->hi() != b->hi()) return a->hi() > b->hi();
    return a->id < b->id;
  });
  // Spans of same-sign clauses are laminar for a planar monotone instance;
  // verify rather than assume.
  std::vector<ClauseGeom*> stack;
  int band = 0;
  for (auto* c : cs) {
    // Spans sharing only an endpoint position count as disjoint.
    while (!stack.empty() &&
           (c->lo() > stack.back()->hi() ||
            (c->lo() == stack.back()->hi() && c->hi() > stack.back()->hi())))
      stack.pop_back();
    if (!stack.empty() && c->hi() > stack.back()->hi() && c->lo() > stack.back()->lo())
      throw ContractError("clause spans interleave; embedding is not planar-monotone");
    c->depth = static_cast<int>(stack.size());
    stack.push_back(c);
    c->band = ++band;  // DFS preorder: parent gets a band nearer the primaries
  }
}

struct NotchUnit {
  ClauseGeom* c;
  bool max_type;  // notch position is the clause's rightmost member position
};

}  // namespace

SegmentRepresentation build_segment_representation(const embed::EmbeddedFormula& ef,
                                                   const ExpandedFormula& xf) {
  if (!ef.curve) throw ContractError("embedded formula lacks a separating curve");
  std::string why;
  if (!embed::check_separating_curve(ef, &why))
    throw ContractError("separating curve invalid: " + why);
  std::vector<int> order;
  for (const auto& st : ef.curve->stations) order.push_back(st.var);
  return build_segment_representation_with_order(ef.formula, xf, order);
}

SegmentRepresentation build_segment_representation_with_order(
    const sat::CnfFormula& formula, const ExpandedFormula& xf,
    const std::vector<int>& var_order) {
  if (!sat::check_monotone(formula)) throw ContractError("formula must be monotone");
  if (xf.base.variable_count != formula.variable_count ||
      xf.base.clauses.size() != formula.clauses.size())
    throw ContractError("expanded formula does not match the base formula");

  SegmentRepresentation sr;
  const int nvars = formula.variable_count;
  if (static_cast<int>(var_order.size()) != nvars)
    throw ContractError("variable order must cover every variable");
  sr.var_order = var_order;
  std::vector<int> pos_of(nvars, -1);
  for (int p = 0; p < nvars; ++p) pos_of[sr.var_order[p]] = p;

  std::vector<ClauseGeom> geoms(formula.clauses.size());
  std::vector<ClauseGeom*> pos_cs, neg_cs;
  for (std::size_t c = 0; c < formula.clauses.size(); ++c) {
    auto& g = geoms[c];
    g.id = static_cast<int>(c);
    g.positive = sat::clause_positive(formula.clauses[c]);
    for (int lit : formula.clauses[c]) g.member_pos.push_back(pos_of[std::abs(lit) - 1]);
    std::sort(g.member_pos.begin(), g.member_pos.end());
    (g.positive ? pos_cs : neg_cs).push_back(&g);
  }
  assign_depths_and_bands(pos_cs);
  assign_depths_and_bands(neg_cs);

  // members sorted by stack position; member index m refers to the clause's
  // literal order, so keep a map position -> member index.
  auto member_at_pos = [&](const ClauseGeom& g, int p) {
    const auto& lits = formula.clauses[g.id];
    for (std::size_t m = 0; m < lits.size(); ++m)
      if (pos_of[std::abs(lits[m]) - 1] == p) return static_cast<int>(m);
    throw InternalError("member lookup failed");
  };

  // Slot allocation. leg_x[clause][member], or_x[clause][member].
  std::map<std::pair<int, int>, int> leg_x, or_x;
  std::vector<int> l_end(nvars), r_end(nvars);
  int x = 0;

  // In-notch order: legs at their clause's rightmost position go left of
  // enclosing clauses' legs (innermost first); legs at the leftmost position
  // go right of them (outermost first). The or-block rides the closing leg:
  // right of it for positive clauses, left of it for negative ones.
  auto alloc_notch = [&](int p, bool positive) {
    std::vector<NotchUnit> units;
    auto& cs = positive ? pos_cs : neg_cs;
    for (auto* c : cs) {
      bool has = std::find(c->member_pos.begin(), c->member_pos.end(), p) != c->member_pos.end();
      if (!has) continue;
      units.push_back({c, p == c->hi()});
    }
    std::stable_sort(units.begin(), units.end(), [&](const NotchUnit& a, const NotchUnit& b) {
      if (a.max_type != b.max_type) return a.max_type;
      return a.max_type ? a.c->depth > b.c->depth : a.c->depth < b.c->depth;
    });
    for (const auto& u : units) {
      int m = member_at_pos(*u.c, p);
      int width = static_cast<int>(u.c->member_pos.size());
      auto emit_block = [&]() {
        for (int k = 0; k < width; ++k) {
          int mk = member_at_pos(*u.c, u.c->member_pos[k]);
          or_x[{u.c->id, mk}] = x++;
        }
      };
      if (!positive && p == u.c->lo()) emit_block();
      leg_x[{u.c->id, m}] = x++;
      if (positive && p == u.c->hi()) emit_block();
    }
  };

  for (int p = 0; p < nvars; ++p) {
    alloc_notch(p, false);
    l_end[p] = x++;
  }
  x++;  // common overlap region
  for (int p = 0; p < nvars; ++p) {
    alloc_notch(p, true);
    r_end[p] = x++;
  }

  // y levels, bottom-up: negative bands deepest-first, primaries, positive.
  int y = 0;
  std::vector<int> clause_rows_base(formula.clauses.size(), -1);
  // negative: reverse band order so band 1 (outermost) is adjacent to x_1.
  std::vector<ClauseGeom*> neg_sorted = neg_cs;
  std::sort(neg_sorted.begin(), neg_sorted.end(),
            [](auto* a, auto* b) { return a->band > b->band; });
  struct PendingRow {
    Row row;
  };
  std::vector<Row> rows;
  auto add_neg_band = [&](ClauseGeom* c) {
    int w = static_cast<int>(c->member_pos.size());
    // bottom: or segment
    Row orrow;
    orrow.kind = RowKind::OrSegment;
    orrow.positive = false;
    orrow.clause = c->id;
    orrow.y = y++;
    int or_lo = or_x[{c->id, member_at_pos(*c, c->member_pos[0])}];
    int or_hi = or_x[{c->id, member_at_pos(*c, c->member_pos[w - 1])}];
    orrow.x1 = std::min(or_lo, or_hi);
    orrow.x2 = std::max(or_lo, or_hi);
    rows.push_back(orrow);
    for (int k = 0; k < w; ++k) {  // bottom-up: leftmost leg first
      int m = member_at_pos(*c, c->member_pos[k]);
      Row r;
      r.kind = RowKind::Aux;
      r.positive = false;
      r.clause = c->id;
      r.member = m;
      r.var = xf.aux_index(c->id, m) ;
      r.y = y++;
      r.x1 = or_x[{c->id, m}];
      r.x2 = leg_x[{c->id, m}];
      rows.push_back(r);
    }
    y++;  // spacing band between clause groups
  };
  for (auto* c : neg_sorted) add_neg_band(c);

  // primaries
  for (int p = 0; p < nvars; ++p) {
    Row r;
    r.kind = RowKind::Primary;
    r.var = sr.var_order[p];
    r.member = p;  // stack position
    r.y = y++;
    r.x1 = l_end[p];
    r.x2 = r_end[p];
    rows.push_back(r);
  }

  std::vector<ClauseGeom*> pos_sorted = pos_cs;
  std::sort(pos_sorted.begin(), pos_sorted.end(),
            [](auto* a, auto* b) { return a->band < b->band; });
  for (auto* c : pos_sorted) {
    y++;  // spacing
    int w = static_cast<int>(c->member_pos.size());
    for (int k = 0; k < w; ++k) {
      int m = member_at_pos(*c, c->member_pos[k]);
      Row r;
      r.kind = RowKind::Aux;
      r.positive = true;
      r.clause = c->id;
      r.member = m;
      r.var = xf.aux_index(c->id, m);
      r.y = y++;
      r.x1 = leg_x[{c->id, m}];
      r.x2 = or_x[{c->id, m}];
      rows.push_back(r);
    }
    Row orrow;
    orrow.kind = RowKind::OrSegment;
    orrow.positive = true;
    orrow.clause = c->id;
    orrow.y = y++;
    int or_lo = or_x[{c->id, member_at_pos(*c, c->member_pos[0])}];
    int or_hi = or_x[{c->id, member_at_pos(*c, c->member_pos[w - 1])}];
    orrow.x1 = std::min(or_lo, or_hi);
    orrow.x2 = std::max(or_lo, or_hi);
    rows.push_back(orrow);
  }
  sr.rows = rows;
  (void)clause_rows_base;

  auto row_y = [&](RowKind kind, int clause, int member) {
    return sr.rows[sr.row_at(kind, clause, member)].y;
  };
  auto primary_y = [&](int p) { return sr.rows[sr.primary_row(p)].y; };

  // Columns.
  for (std::size_t c = 0; c < formula.clauses.size(); ++c) {
    const auto& g = geoms[c];
    for (std::size_t m = 0; m < formula.clauses[c].size(); ++m) {
      int base_var = std::abs(formula.clauses[c][m]) - 1;
      int p = pos_of[base_var];
      Column leg;
      leg.kind = ColumnKind::Implication;
      leg.x = leg_x[{static_cast<int>(c), static_cast<int>(m)}];
      leg.clause = static_cast<int>(c);
      leg.member = static_cast<int>(m);
      leg.positive = g.positive;
      leg.base_var = base_var;
      int ay = row_y(RowKind::Aux, leg.clause, leg.member);
      int py = primary_y(p);
      leg.y1 = std::min(ay, py);
      leg.y2 = std::max(ay, py);
      sr.columns.push_back(leg);

      Column link;
      link.kind = ColumnKind::OrLink;
      link.x = or_x[{static_cast<int>(c), static_cast<int>(m)}];
      link.clause = static_cast<int>(c);
      link.member = static_cast<int>(m);
      link.positive = g.positive;
      int oy = row_y(RowKind::OrSegment, leg.clause, -1);
      link.y1 = std::min(ay, oy);
      link.y2 = std::max(ay, oy);
      sr.columns.push_back(link);
    }
  }

  // Crossings (geometric recomputation is also the validator's oracle).
  for (std::size_t ci = 0; ci < sr.columns.size(); ++ci) {
    const auto& col = sr.columns[ci];
    for (std::size_t ri = 0; ri < sr.rows.size(); ++ri) {
      const auto& row = sr.rows[ri];
      if (col.x < row.x1 || col.x > row.x2) continue;
      if (row.y < col.y1 || row.y > col.y2) continue;
      bool endpoint = (row.y == col.y1 || row.y == col.y2);
      sr.crossings.push_back({static_cast<int>(ci), static_cast<int>(ri), endpoint});
    }
  }
  return sr;
}

ValidationReport validate_representation(const SegmentRepresentation& sr) {
  ValidationReport rep;
  auto add = [&](const std::string& s) { rep.violations.push_back(s); };

  std::vector<const Row*> primaries;
  for (const auto& r : sr.rows)
    if (r.kind == RowKind::Primary) primaries.push_back(&r);
  std::sort(primaries.begin(), primaries.end(),
            [](const Row* a, const Row* b) { return a->y < b->y; });
  for (std::size_t i = 1; i < primaries.size(); ++i) {
    if (!(primaries[i]->x1 > primaries[i - 1]->x1 && primaries[i]->x2 > primaries[i - 1]->x2))
      add("primary endpoints not strictly increasing");
  }
  if (!primaries.empty() && primaries.back()->x1 >= primaries.front()->x2)
    add("primary rows have no common overlap");

  int top_primary = primaries.empty() ? 0 : primaries.back()->y;
  int bot_primary = primaries.empty() ? 0 : primaries.front()->y;
  for (const auto& r : sr.rows) {
    if (r.kind == RowKind::Primary) continue;
    if (r.positive && r.y <= top_primary) add("positive clause row below the primary stack");
    if (!r.positive && r.y >= bot_primary) add("negative clause row above the primary stack");
  }

  // Nesting: for same-sign clause pairs with nested spans, the inner clause's
  // rows must be farther from the primary stack.
  auto clause_span = [&](int clause, bool positive) {
    int lo = 1 << 30, hi = -(1 << 30), band_lo = 1 << 30, band_hi = -(1 << 30);
    for (const auto& c : sr.columns) {
      if (c.clause != clause || c.kind != ColumnKind::Implication) continue;
      lo = std::min(lo, c.x);
      hi = std::max(hi, c.x);
    }
    for (const auto& r : sr.rows)
      if (r.kind != RowKind::Primary && r.clause == clause) {
        band_lo = std::min(band_lo, r.y);
        band_hi = std::max(band_hi, r.y);
      }
    (void)positive;
    return std::tuple{lo, hi, band_lo, band_hi};
  };
  std::set<std::pair<int, bool>> clauses;
  for (const auto& r : sr.rows)
    if (r.kind != RowKind::Primary) clauses.insert({r.clause, r.positive});
  for (const auto& [c1, p1] : clauses)
    for (const auto& [c2, p2] : clauses) {
      if (c1 == c2 || p1 != p2) continue;
      auto [lo1, hi1, b1lo, b1hi] = clause_span(c1, p1);
      auto [lo2, hi2, b2lo, b2hi] = clause_span(c2, p2);
      if (lo1 < lo2 && hi2 < hi1) {  // c2 strictly nested in c1
        bool ok = p1 ? (b2lo > b1hi) : (b2hi < b1lo);
        if (!ok) add("nested clause rows not beyond the enclosing clause's rows");
      }
    }

  // OR segments crossed by no vertical segment.
  for (const auto& cr : sr.crossings)
    if (!cr.attach && sr.rows[cr.row].kind == RowKind::OrSegment)
      add("or segment crossed by a column");

  // Crossing list matches geometry.
  std::set<std::tuple<int, int, bool>> listed;
  for (const auto& cr : sr.crossings) listed.insert({cr.column, cr.row, cr.attach});
  for (std::size_t ci = 0; ci < sr.columns.size(); ++ci)
    for (std::size_t ri = 0; ri < sr.rows.size(); ++ri) {
      const auto& col = sr.columns[ci];
      const auto& row = sr.rows[ri];
      bool hit = col.x >= row.x1 && col.x <= row.x2 && row.y >= col.y1 && row.y <= col.y2;
      if (!hit) continue;
      bool endpoint = (row.y == col.y1 || row.y == col.y2);
      if (!listed.count({static_cast<int>(ci), static_cast<int>(ri), endpoint}))
        add("crossing list misses an incidence");
    }

  // All segment endpoints incident to the outer face (doubled-grid flood).
  int min_x = 1 << 30, max_x = -(1 << 30), min_y = 1 << 30, max_y = -(1 << 30);
  auto stretch = [&](int xx, int yy) {
    min_x = std::min(min_x, xx);
    max_x = std::max(max_x, xx);
    min_y = std::min(min_y, yy);
    max_y = std::max(max_y, yy);
  };
  for (const auto& r : sr.rows) {
    stretch(r.x1, r.y);
    stretch(r.x2, r.y);
  }
  for (const auto& c : sr.columns) {
    stretch(c.x, c.y1);
    stretch(c.x, c.y2);
  }
  if (sr.rows.empty()) return rep;

  int W = 2 * (max_x - min_x) + 5, H = 2 * (max_y - min_y) + 5;
  auto dx = [&](int xx) { return 2 * (xx - min_x) + 2; };
  auto dy = [&](int yy) { return 2 * (yy - min_y) + 2; };
  // cell (i,j) = [i,i+1]x[j,j+1] in doubled coordinates, i in [0,W), j in [0,H)
  std::vector<bool> flooded(static_cast<std::size_t>(W) * H, false);
  auto blocked_v = [&](int i, int j) {
    // move (i,j-1) <-> (i,j): crosses horizontal line y=j
    for (const auto& r : sr.rows)
      if (dy(r.y) == j && i + 1 > dx(r.x1) && i < dx(r.x2)) return true;
    return false;
  };
  auto blocked_h = [&](int i, int j) {
    for (const auto& c : sr.columns)
      if (dx(c.x) == i && j + 1 > dy(c.y1) && j < dy(c.y2)) return true;
    return false;
  };
  std::queue<std::pair<int, int>> q;
  q.push({0, 0});
  flooded[0] = true;
  while (!q.empty()) {
    auto [i, j] = q.front();
    q.pop();
    auto visit = [&](int ni, int nj) {
      if (ni < 0 || nj < 0 || ni >= W || nj >= H) return;
      std::size_t idx = static_cast<std::size_t>(nj) * W + ni;
      if (flooded[idx]) return;
      if (ni != i && blocked_h(std::max(i, ni), j)) return;
      if (nj != j && blocked_v(i, std::max(j, nj))) return;
      flooded[idx] = true;
      q.push({ni, nj});
    };
    visit(i + 1, j);
    visit(i - 1, j);
    visit(i, j + 1);
    visit(i, j - 1);
  }
  auto endpoint_ok = [&](int xx, int yy) {
    int i = dx(xx), j = dy(yy);
    for (int a = i - 1; a <= i; ++a)
      for (int b = j - 1; b <= j; ++b)
        if (a >= 0 && b >= 0 && a < W && b < H && flooded[static_cast<std::size_t>(b) * W + a])
          return true;
    return false;
  };
  for (const auto& r : sr.rows) {
    if (!endpoint_ok(r.x1, r.y) || !endpoint_ok(r.x2, r.y))
      add("row endpoint not incident to the outer face (y=" + std::to_string(r.y) + ")");
  }
  for (const auto& c : sr.columns) {
    if (!endpoint_ok(c.x, c.y1) || !endpoint_ok(c.x, c.y2))
      add("column endpoint not incident to the outer face (x=" + std::to_string(c.x) + ")");
  }
  return rep;
}

std::string representation_to_json_text(const SegmentRepresentation& sr) {
  json rows = json::array();
  for (const auto& r : sr.rows)
    rows.push_back(json{{"kind", static_cast<int>(r.kind)},
                        {"y", r.y},
                        {"x1", r.x1},
                        {"x2", r.x2},
                        {"positive", r.positive},
                        {"var", r.var},
                        {"clause", r.clause},
                        {"member", r.member}});
  json cols = json::array();
  for (const auto& c : sr.columns)
    cols.push_back(json{{"kind", static_cast<int>(c.kind)},
                        {"x", c.x},
                        {"y1", c.y1},
                        {"y2", c.y2},
                        {"clause", c.clause},
                        {"member", c.member},
                        {"positive", c.positive},
                        {"base_var", c.base_var}});
  json crossings = json::array();
  for (const auto& cr : sr.crossings)
    crossings.push_back(json{{"column", cr.column}, {"row", cr.row}, {"attach", cr.attach}});
  json root{{"rows", rows},
            {"columns", cols},
            {"crossings", crossings},
            {"var_order", sr.var_order}};
  return root.dump(2) + "\n";
}

SegmentRepresentation representation_from_json_text(const std::string& text) {
  json root = json::parse(text);
  SegmentRepresentation sr;
  for (const auto& jr : root.at("rows")) {
    Row r;
    r.kind = static_cast<RowKind>(jr.at("kind").get<int>());
    r.y = jr.at("y").get<int>();
    r.x1 = jr.at("x1").get<int>();
    r.x2 = jr.at("x2").get<int>();
    r.positive = jr.at("positive").get<bool>();
    r.var = jr.at("var").get<int>();
    r.clause = jr.at("clause").get<int>();
    r.member = jr.at("member").get<int>();
    sr.rows.push_back(r);
  }
  for (const auto& jc : root.at("columns")) {
    Column c;
    c.kind = static_cast<ColumnKind>(jc.at("kind").get<int>());
    c.x = jc.at("x").get<int>();
    c.y1 = jc.at("y1").get<int>();
    c.y2 = jc.at("y2").get<int>();
    c.clause = jc.at("clause").get<int>();
    c.member = jc.at("member").get<int>();
    c.positive = jc.at("positive").get<bool>();
    c.base_var = jc.at("base_var").get<int>();
    sr.columns.push_back(c);
  }
  for (const auto& jx : root.at("crossings"))
    sr.crossings.push_back(
        {jx.at("column").get<int>(), jx.at("row").get<int>(), jx.at("attach").get<bool>()});
  for (const auto& v : root.at("var_order")) sr.var_order.push_back(v.get<int>());
  return sr;
}

}  // namespace recon::layout
