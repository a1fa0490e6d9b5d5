#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "recon/ncl.hpp"

namespace recon::gen {

/// Theta graph: two AND vertices joined by one blue and two red parallel
/// edges. Start orientation points the blue edge into u; target is the
/// reverse of every edge.
ncl::NclInstance theta_instance();

/// K4, all edges blue, all vertices OR, with a planar rotation system.
/// Start/target are chosen feasible orientations.
ncl::NclInstance k4_instance();

/// Random embedded cubic instance grown from the theta graph by repeated
/// in-face edge expansion. Deterministic in `seed`; at most `max_edges` edges.
/// Returns nullopt if no pair of feasible orientations exists (does not
/// happen for the sizes used here, but kept honest).
std::optional<ncl::NclInstance> random_instance(std::uint64_t seed, int max_edges);

/// Enumerate all feasible orientations (edge count <= 24).
std::vector<ncl::Orientation> feasible_orientations(const ncl::NclGraph& g);

}  // namespace recon::gen
