#include "doctest.h"

#include "recon/errors.hpp"
#include "recon/sat.hpp"

using namespace recon;
using sat::Assignment;
using sat::CnfFormula;

TEST_CASE("satisfies basic examples") {
  CnfFormula f;
  f.variable_count = 3;
  f.clauses = {{1, 2, 3}};
  CHECK(sat::satisfies(f, {true, false, false}));
  CnfFormula g;
  g.variable_count = 2;
  g.clauses = {{-1, -2}};
  CHECK(!sat::satisfies(g, {true, true}));
  CHECK_THROWS_AS(sat::satisfies(g, {true}), ContractError);
}

TEST_CASE("monotonicity check") {
  CnfFormula f;
  f.variable_count = 5;
  f.clauses = {{1, 2, 3}, {-4, -5}};
  CHECK(sat::check_monotone(f));
  f.clauses.push_back({1, -2});
  CHECK(!sat::check_monotone(f));
}

TEST_CASE("reconfig trivial and two-variable example") {
  CnfFormula f;
  f.variable_count = 2;
  f.clauses = {{1, 2}, {-1, -2}};
  Assignment a0{true, false}, a1{false, true};
  CHECK(sat::reconfig_reachable(f, a0, a0));
  CHECK(!sat::reconfig_reachable(f, a0, a1));
  CHECK(!sat::reconfig_reachable_unionfind(f, a0, a1));
  CHECK_THROWS_AS(sat::reconfig_reachable(f, {true, true}, a1), ContractError);
}

TEST_CASE("bfs agrees with union-find on random small formulas") {
  std::uint64_t state = 12345;
  auto rnd = [&]() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return state >> 33;
  };
  for (int trial = 0; trial < 40; ++trial) {
    CnfFormula f;
    f.variable_count = 3 + static_cast<int>(rnd() % 6);  // up to 8 vars
    int clauses = 2 + static_cast<int>(rnd() % 6);
    for (int c = 0; c < clauses; ++c) {
      std::vector<int> clause;
      int width = 1 + static_cast<int>(rnd() % 3);
      while (static_cast<int>(clause.size()) < width) {
        int v = 1 + static_cast<int>(rnd() % f.variable_count);
        bool dup = false;
        for (int lit : clause) dup |= std::abs(lit) == v;
        if (dup) continue;
        clause.push_back(rnd() % 2 ? v : -v);
      }
      f.clauses.push_back(clause);
    }
    auto sats = sat::enumerate_satisfying(f);
    if (sats.size() < 2) continue;
    const auto& a0 = sats[rnd() % sats.size()];
    const auto& a1 = sats[rnd() % sats.size()];
    CHECK(sat::reconfig_reachable(f, a0, a1) == sat::reconfig_reachable_unionfind(f, a0, a1));
  }
}

TEST_CASE("reconfig result invariant under consistent variable permutation") {
  CnfFormula f;
  f.variable_count = 4;
  f.clauses = {{1, 2, 3}, {-2, -4}, {3, 4}};
  auto sats = sat::enumerate_satisfying(f);
  REQUIRE(sats.size() >= 2);
  Assignment a0 = sats.front(), a1 = sats.back();
  bool base = sat::reconfig_reachable(f, a0, a1);
  // permutation: reverse variable order
  auto perm = [&](int v) { return f.variable_count + 1 - v; };
  CnfFormula pf;
  pf.variable_count = f.variable_count;
  for (auto c : f.clauses) {
    for (auto& lit : c) lit = lit > 0 ? perm(lit) : -perm(-lit);
    pf.clauses.push_back(c);
  }
  auto permute = [&](const Assignment& a) {
    Assignment out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[perm(static_cast<int>(i) + 1) - 1] = a[i];
    return out;
  };
  CHECK(sat::reconfig_reachable(pf, permute(a0), permute(a1)) == base);
}

TEST_CASE("dimacs round trip") {
  CnfFormula f;
  f.variable_count = 3;
  f.clauses = {{1, -2}, {2, 3}};
  auto text = sat::to_dimacs(f);
  auto g = sat::from_dimacs(text);
  CHECK(g.variable_count == 3);
  CHECK(g.clauses == f.clauses);
}
