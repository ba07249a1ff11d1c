#pragma once

#include <string>

#include "addnet/rng.hpp"
#include "addnet/topology.hpp"

namespace addnet {

// Deterministic topology generation; node ids are 1..n shuffled by the seed.
// random_gnp retries until connected (bounded retries).
Topology gen_clique(int n, uint64_t seed);
Topology gen_path(int n, uint64_t seed);
Topology gen_grid(int rows, int cols, uint64_t seed);
Topology gen_star(int n, uint64_t seed); // node 0 is the hub
Topology gen_gnp(int n, double p, uint64_t seed, int max_retries = 200);
Topology gen_tree(int n, uint64_t seed); // uniform random attachment

// family: clique|path|grid|star|gnp|tree. For grid, n must be a perfect
// square unless rows/cols are given via "grid:RxC".
Topology gen_topology(const std::string& family, int n, double p, uint64_t seed);

} // namespace addnet
