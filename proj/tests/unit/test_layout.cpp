#include <set>
#include <string>

#include "doctest.h"

#include "recon/errors.hpp"
#include "recon/gen.hpp"
#include "recon/layout.hpp"
#include "recon/reduce.hpp"

using namespace recon;
using layout::ColumnKind;
using layout::RowKind;

namespace {

sat::CnfFormula single_clause3() {
  sat::CnfFormula f;
  f.variable_count = 3;
  f.clauses = {{1, 2, 3}};
  return f;
}

}  // namespace

TEST_CASE("expand_aux_variables on a positive 3-clause") {
  auto xf = layout::expand_aux_variables(single_clause3());
  CHECK(xf.full.variable_count == 6);
  REQUIRE(xf.full.clauses.size() == 4);
  CHECK(xf.full.clauses[0] == std::vector<int>{-4, 1});
  CHECK(xf.full.clauses[3] == std::vector<int>{4, 5, 6});
  CHECK_THROWS_AS(layout::expand_aux_variables({2, {{1, -2}}}), ContractError);
}

TEST_CASE("expansion mirrors negative clauses") {
  sat::CnfFormula f;
  f.variable_count = 2;
  f.clauses = {{-1, -2}};
  auto xf = layout::expand_aux_variables(f);
  REQUIRE(xf.full.clauses.size() == 3);
  CHECK(xf.full.clauses[0] == std::vector<int>{3, -1});
  CHECK(xf.full.clauses[2] == std::vector<int>{-3, -4});
}

TEST_CASE("expansion preserves reconfiguration reachability") {
  // A few small monotone formulas; compare base vs expanded reachability
  // between lifted endpoints.
  std::vector<sat::CnfFormula> cases;
  cases.push_back({3, {{1, 2, 3}}});
  cases.push_back({3, {{1, 2}, {-2, -3}}});
  cases.push_back({4, {{1, 2, 3}, {-1, -4}, {3, 4}}});
  for (const auto& f : cases) {
    auto xf = layout::expand_aux_variables(f);
    auto sols = sat::enumerate_satisfying(f);
    for (std::size_t i = 0; i + 1 < sols.size(); i += 2) {
      bool base = sat::reconfig_reachable(f, sols[i], sols[i + 1]);
      bool full = sat::reconfig_reachable(xf.full, layout::lift_assignment(xf, sols[i]),
                                          layout::lift_assignment(xf, sols[i + 1]));
      CHECK(base == full);
    }
  }
}

TEST_CASE("flip ordering: aux first keeps intermediates satisfying") {
  auto f = single_clause3();
  auto xf = layout::expand_aux_variables(f);
  // alpha = TTT -> flip x1 to false: first y_{t,1} then x1.
  auto a = layout::lift_assignment(xf, {true, true, true});
  REQUIRE(sat::satisfies(xf.full, a));
  a[xf.aux_index(0, 0)] = false;
  CHECK(sat::satisfies(xf.full, a));
  a[0] = false;
  CHECK(sat::satisfies(xf.full, a));
}

TEST_CASE("segment representation for a single 3-clause") {
  auto f = single_clause3();
  auto xf = layout::expand_aux_variables(f);
  auto sr = layout::build_segment_representation_with_order(f, xf, {0, 1, 2});
  int primary = 0, aux = 0, orseg = 0;
  for (const auto& r : sr.rows) {
    if (r.kind == RowKind::Primary) primary++;
    if (r.kind == RowKind::Aux) aux++;
    if (r.kind == RowKind::OrSegment) orseg++;
  }
  CHECK(primary == 3);
  CHECK(aux == 3);
  CHECK(orseg == 1);
  CHECK(sr.columns.size() == 6);
  auto rep = layout::validate_representation(sr);
  std::string msg = rep.ok() ? std::string() : rep.violations.front();
  CHECK_MESSAGE(rep.ok(), msg);
}

TEST_CASE("column count invariant: two per clause member") {
  auto arts = reduce::reduce(gen::theta_instance());
  auto xf = layout::expand_aux_variables(arts.embedded.formula);
  auto sr = layout::build_segment_representation(arts.embedded, xf);
  std::size_t members = 0;
  for (const auto& c : arts.embedded.formula.clauses) members += c.size();
  CHECK(sr.columns.size() == 2 * members);
  int impl = 0, links = 0;
  for (const auto& c : sr.columns)
    (c.kind == ColumnKind::Implication ? impl : links)++;
  CHECK(impl == links);
}

TEST_CASE("theta and k4 representations validate") {
  for (auto inst : {gen::theta_instance(), gen::k4_instance()}) {
    auto arts = reduce::reduce(inst);
    auto xf = layout::expand_aux_variables(arts.embedded.formula);
    auto sr = layout::build_segment_representation(arts.embedded, xf);
    auto rep = layout::validate_representation(sr);
    std::string msg = rep.ok() ? std::string() : rep.violations.front();
    CHECK_MESSAGE(rep.ok(), msg);
  }
}

TEST_CASE("representations of random reduced instances validate") {
  for (std::uint64_t seed = 30; seed < 40; ++seed) {
    auto inst = gen::random_instance(seed, 12);
    REQUIRE(inst.has_value());
    auto arts = reduce::reduce(*inst);
    auto xf = layout::expand_aux_variables(arts.embedded.formula);
    auto sr = layout::build_segment_representation(arts.embedded, xf);
    auto rep = layout::validate_representation(sr);
    std::string msg = rep.ok() ? std::string() : rep.violations.front();
    CHECK_MESSAGE(rep.ok(), msg);
  }
}

TEST_CASE("validator flags corrupted representations") {
  auto f = single_clause3();
  auto xf = layout::expand_aux_variables(f);
  auto sr = layout::build_segment_representation_with_order(f, xf, {0, 1, 2});
  // Extend a column so it crosses the or segment.
  auto broken = sr;
  for (auto& c : broken.columns)
    if (c.kind == ColumnKind::Implication) c.y2 += 10;
  CHECK(!layout::validate_representation(broken).ok());
  // Break the staircase.
  auto broken2 = sr;
  for (auto& r : broken2.rows)
    if (r.kind == RowKind::Primary && r.member == 1) r.x1 = broken2.rows[0].x1 - 5;
  CHECK(!layout::validate_representation(broken2).ok());
}

TEST_CASE("representation json round trip") {
  auto f = single_clause3();
  auto xf = layout::expand_aux_variables(f);
  auto sr = layout::build_segment_representation_with_order(f, xf, {0, 1, 2});
  auto text = layout::representation_to_json_text(sr);
  auto back = layout::representation_from_json_text(text);
  CHECK(layout::representation_to_json_text(back) == text);
  CHECK(back.rows.size() == sr.rows.size());
}
