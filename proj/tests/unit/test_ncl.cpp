#include <string>

#include "doctest.h"

#include "recon/errors.hpp"
#include "recon/gen.hpp"
#include "recon/ncl.hpp"

using namespace recon;

TEST_CASE("theta graph validates cleanly") {
  auto inst = gen::theta_instance();
  auto rep = ncl::validate_graph(inst.graph);
  std::string msg = rep.ok() ? std::string() : rep.violations.front();
  CHECK_MESSAGE(rep.ok(), msg);
  auto faces = ncl::trace_faces(inst.graph);
  CHECK(faces.faces.size() == 3);
}

TEST_CASE("color pattern violations are reported") {
  auto inst = gen::theta_instance();
  for (auto& e : inst.graph.edges) e.color = ncl::EdgeColor::Blue;
  auto rep = ncl::validate_graph(inst.graph);
  CHECK(!rep.ok());
}

TEST_CASE("K4 all blue all OR validates") {
  auto inst = gen::k4_instance();
  auto rep = ncl::validate_graph(inst.graph);
  std::string msg = rep.ok() ? std::string() : rep.violations.front();
  CHECK_MESSAGE(rep.ok(), msg);
  auto faces = ncl::trace_faces(inst.graph);
  CHECK(faces.faces.size() == 4);
}

TEST_CASE("theta feasibility per example") {
  auto inst = gen::theta_instance();
  const auto& g = inst.graph;
  CHECK(ncl::is_feasible(g, inst.start));
  CHECK(ncl::is_feasible(g, inst.target));
  // blue and one red into u, the other red into v: v has in-weight 1.
  ncl::Orientation bad{{true, true, false}};
  CHECK(!ncl::is_feasible(g, bad));
  // Exactly two feasible orientations exist.
  CHECK(gen::feasible_orientations(g).size() == 2);
}

TEST_CASE("theta has no reversal neighbors and is unreachable") {
  auto inst = gen::theta_instance();
  CHECK(ncl::reversal_neighbors(inst.graph, inst.start).empty());
  CHECK(!ncl::reachable(inst));
  ncl::NclInstance same = inst;
  same.target = same.start;
  CHECK(ncl::reachable(same));
}

TEST_CASE("reversal neighbors are feasible one-edge flips ordered by edge") {
  auto inst = gen::k4_instance();
  auto nbrs = ncl::reversal_neighbors(inst.graph, inst.start);
  CHECK(!nbrs.empty());
  for (const auto& n : nbrs) {
    int diff = 0;
    for (std::size_t i = 0; i < n.reversed.size(); ++i)
      diff += n.reversed[i] != inst.start.reversed[i];
    CHECK(diff == 1);
    CHECK(ncl::is_feasible(inst.graph, n));
  }
}

TEST_CASE("reachable is symmetric and reflexive on random instances") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto inst = gen::random_instance(seed, 12);
    REQUIRE(inst.has_value());
    bool fwd = ncl::reachable(*inst);
    std::swap(inst->start, inst->target);
    CHECK(ncl::reachable(*inst) == fwd);
    inst->target = inst->start;
    CHECK(ncl::reachable(*inst));
  }
}

TEST_CASE("reachable enforces the edge cap") {
  auto inst = gen::theta_instance();
  CHECK_THROWS_AS(ncl::reachable(inst, 2), ResourceLimitError);
}

TEST_CASE("instance json round-trips byte-stably") {
  auto inst = gen::k4_instance();
  std::string a = ncl::instance_to_json_text(inst);
  auto again = ncl::instance_from_json_text(a);
  std::string b = ncl::instance_to_json_text(again);
  CHECK(a == b);
  CHECK(again.graph.edges.size() == 6);
  CHECK(again.start.reversed == inst.start.reversed);
}
