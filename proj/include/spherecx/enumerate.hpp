#pragma once

#include <vector>

#include "spherecx/normal_system.hpp"

namespace spherecx {

/// Every embedded normal sphere with at most W intersection circles with the
/// scaffold (scaffold spheres included), sorted by key.
std::vector<Sphere> enumerate_spheres(const Scaffold& sc, int W);
/// Same result, single-threaded; kept as the reference for the parallel kernel.
std::vector<Sphere> enumerate_spheres_serial(const Scaffold& sc, int W);

/// Every canonical system with total weight at most W, each once, ordered by
/// signature.
std::vector<NormalSystem> enumerate_systems(ScaffoldPtr sc, int W);
std::vector<NormalSystem> enumerate_systems_serial(ScaffoldPtr sc, int W);

/// Connected subtrees of the cover tree containing a base node of `piece`
/// with exactly `edges` edges (frontier colours left zero).
std::vector<Tree> subtrees_at(const Scaffold& sc, int piece, int edges);

}  // namespace spherecx
