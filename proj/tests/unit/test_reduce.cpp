#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "doctest.h"

#include "recon/embed.hpp"
#include "recon/errors.hpp"
#include "recon/gen.hpp"
#include "recon/reduce.hpp"

using namespace recon;

TEST_CASE("subdivide counts per example") {
  auto theta = gen::theta_instance();
  auto s = reduce::subdivide(theta.graph);
  CHECK(s.vertex_count() == 5);
  CHECK(s.half_count() == 6);
  auto k4 = gen::k4_instance();
  auto s2 = reduce::subdivide(k4.graph);
  CHECK(s2.vertex_count() == 10);
}

TEST_CASE("theta reduction shape") {
  auto arts = reduce::reduce(gen::theta_instance());
  const auto& f = arts.embedded.formula;
  CHECK(f.variable_count == 6);
  int pos = 0, neg = 0;
  for (const auto& c : f.clauses) {
    bool p = sat::clause_positive(c);
    (p ? pos : neg)++;
    if (p)
      CHECK(c.size() == 2);  // AND vertices emit 2-literal clauses
    else
      CHECK(c.size() == 2);
  }
  CHECK(pos == 4);
  CHECK(neg == 3);
  CHECK(sat::check_monotone(f));
  CHECK(sat::satisfies(f, arts.alpha));
  CHECK(sat::satisfies(f, arts.alpha_prime));
}

TEST_CASE("k4 reduction shape") {
  auto arts = reduce::reduce(gen::k4_instance());
  const auto& f = arts.embedded.formula;
  CHECK(f.variable_count == 12);
  int pos3 = 0, neg2 = 0;
  for (const auto& c : f.clauses) {
    if (sat::clause_positive(c)) {
      CHECK(c.size() == 3);
      pos3++;
    } else {
      CHECK(c.size() == 2);
      neg2++;
    }
  }
  CHECK(pos3 == 4);
  CHECK(neg2 == 6);
}

TEST_CASE("orientation-assignment correspondence round trips") {
  auto arts = reduce::reduce(gen::k4_instance());
  for (const auto& o : gen::feasible_orientations(arts.instance.graph)) {
    auto a = reduce::orientation_to_assignment(arts, o);
    CHECK(sat::satisfies(arts.embedded.formula, a));
    auto back = reduce::assignment_to_orientation(arts, a);
    CHECK(back.reversed == o.reversed);
  }
}

TEST_CASE("base orientation maps to all x_plus true") {
  auto inst = gen::theta_instance();
  inst.start.reversed = {true, false, false};  // any feasible; check rule per edge
  auto arts = reduce::reduce(inst);
  auto a = reduce::orientation_to_assignment(arts, inst.start);
  for (std::size_t e = 0; e < inst.graph.edges.size(); ++e) {
    if (inst.start.reversed[e]) {
      CHECK(a[arts.edge_vars[e][0]]);
      CHECK(!a[arts.edge_vars[e][1]]);
    } else {
      CHECK(!a[arts.edge_vars[e][0]]);
      CHECK(a[arts.edge_vars[e][1]]);
    }
  }
}

TEST_CASE("both-false resolves to base direction") {
  auto arts = reduce::reduce(gen::theta_instance());
  sat::Assignment a = arts.alpha;
  // Make edge 1 both-false (it was reds into v, x_plus true).
  a[arts.edge_vars[1][1]] = false;
  if (sat::satisfies(arts.embedded.formula, a)) {
    auto o = reduce::assignment_to_orientation(arts, a);
    CHECK(!o.reversed[1]);
  }
  sat::Assignment bad = arts.alpha;
  bad[arts.edge_vars[1][0]] = true;
  CHECK_THROWS_AS(reduce::assignment_to_orientation(arts, bad), ContractError);
}

TEST_CASE("separating curve passes the checker on theta and k4") {
  for (auto inst : {gen::theta_instance(), gen::k4_instance()}) {
    auto arts = reduce::reduce(inst);
    REQUIRE(arts.embedded.curve.has_value());
    CHECK(arts.embedded.curve->stations.size() ==
          static_cast<std::size_t>(arts.embedded.formula.variable_count));
    std::string why;
    bool ok = embed::check_separating_curve(arts.embedded, &why);
    CHECK_MESSAGE(ok, why);
  }
}

TEST_CASE("curve checker rejects corrupted curves") {
  auto arts = reduce::reduce(gen::theta_instance());
  auto ef = arts.embedded;
  // Missing one variable node.
  auto broken = ef;
  broken.curve->stations.pop_back();
  CHECK(!embed::check_separating_curve(broken));
  // Visit a variable twice.
  auto twice = ef;
  twice.curve->stations.push_back(twice.curve->stations.front());
  CHECK(!embed::check_separating_curve(twice));
}

TEST_CASE("curve checker on random instances") {
  for (std::uint64_t seed = 10; seed < 22; ++seed) {
    auto inst = gen::random_instance(seed, 12);
    REQUIRE(inst.has_value());
    auto arts = reduce::reduce(*inst);
    std::string why;
    bool ok = embed::check_separating_curve(arts.embedded, &why);
    CHECK_MESSAGE(ok, why);
    CHECK(sat::check_monotone(arts.embedded.formula));
  }
}

TEST_CASE("reduction equivalence on theta (oracle agreement)") {
  auto arts = reduce::reduce(gen::theta_instance());
  bool ncl_ans = ncl::reachable(arts.instance);
  bool sat_ans =
      sat::reconfig_reachable(arts.embedded.formula, arts.alpha, arts.alpha_prime);
  CHECK(ncl_ans == sat_ans);
  CHECK(!sat_ans);
}

namespace {

// Shortest reversal path start -> target via BFS (small instances only).
std::vector<ncl::Orientation> bfs_path(const ncl::NclInstance& inst) {
  const auto& g = inst.graph;
  int n = static_cast<int>(g.edges.size());
  auto mask = [&](const ncl::Orientation& o) {
    std::uint32_t m = 0;
    for (int i = 0; i < n; ++i)
      if (o.reversed[i]) m |= 1u << i;
    return m;
  };
  auto unmask = [&](std::uint32_t m) {
    ncl::Orientation o;
    o.reversed.resize(n);
    for (int i = 0; i < n; ++i) o.reversed[i] = (m >> i) & 1;
    return o;
  };
  std::uint32_t s = mask(inst.start), t = mask(inst.target);
  std::map<std::uint32_t, std::uint32_t> parent;
  parent[s] = s;
  std::queue<std::uint32_t> q;
  q.push(s);
  while (!q.empty() && !parent.count(t)) {
    auto cur = q.front();
    q.pop();
    for (int i = 0; i < n; ++i) {
      auto nxt = cur ^ (1u << i);
      if (parent.count(nxt) || !ncl::is_feasible(g, unmask(nxt))) continue;
      parent[nxt] = cur;
      q.push(nxt);
    }
  }
  std::vector<ncl::Orientation> path;
  if (!parent.count(t)) return path;
  for (std::uint32_t cur = t;; cur = parent[cur]) {
    path.push_back(unmask(cur));
    if (cur == parent[cur]) break;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

TEST_CASE("lift and project compose on k4 paths") {
  auto inst = gen::k4_instance();
  if (!ncl::reachable(inst)) {
    auto feas = gen::feasible_orientations(inst.graph);
    bool found = false;
    for (const auto& a : feas) {
      for (const auto& b : feas) {
        ncl::NclInstance trial = inst;
        trial.start = a;
        trial.target = b;
        if (a.reversed != b.reversed && ncl::reachable(trial)) {
          inst = trial;
          found = true;
          break;
        }
      }
      if (found) break;
    }
    REQUIRE(found);
  }
  auto arts = reduce::reduce(inst);
  auto path = bfs_path(inst);
  REQUIRE(path.size() >= 2);
  auto lifted = reduce::lift_path(arts, path);
  CHECK(lifted.size() == 2 * path.size() - 1);
  for (std::size_t i = 1; i < lifted.size(); ++i) {
    int diff = 0;
    for (std::size_t v = 0; v < lifted[i].size(); ++v) diff += lifted[i][v] != lifted[i - 1][v];
    CHECK(diff == 1);
    CHECK(sat::satisfies(arts.embedded.formula, lifted[i]));
  }
  auto projected = reduce::project_path(arts, lifted);
  REQUIRE(!projected.empty());
  CHECK(projected.front().reversed == path.front().reversed);
  CHECK(projected.back().reversed == path.back().reversed);
  CHECK(projected.size() == path.size());
}

TEST_CASE("empty path lifts to empty") {
  auto arts = reduce::reduce(gen::theta_instance());
  CHECK(reduce::lift_path(arts, {}).empty());
}

TEST_CASE("formula file round trip keeps embedding and curve") {
  auto arts = reduce::reduce(gen::theta_instance());
  std::vector<sat::Assignment> as{arts.alpha, arts.alpha_prime};
  auto text = embed::to_text(arts.embedded, as);
  std::vector<sat::Assignment> back;
  auto ef = embed::from_text(text, &back);
  CHECK(ef.formula.clauses == arts.embedded.formula.clauses);
  REQUIRE(back.size() == 2);
  CHECK(back[0] == arts.alpha);
  std::string why;
  CHECK_MESSAGE(embed::check_separating_curve(ef, &why), why);
  CHECK(embed::to_text(ef, back) == text);
}
