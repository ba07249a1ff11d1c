#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "addnet/topology.hpp"

namespace addnet {

// Plain graph-search oracles, independent of every codec and protocol code
// path: agreement with them is evidence, not tautology.

std::vector<int> oracle_bfs_distances(const Topology& topo, int source);
int oracle_eccentricity(const Topology& topo, int v);
int oracle_diameter(const Topology& topo);

bool oracle_independent(const Topology& topo, const std::vector<uint8_t>& in_set);
bool oracle_maximal_independent(const Topology& topo, const std::vector<uint8_t>& in_set);

struct ValidityReport {
    bool pass = true;
    nlohmann::json details = nlohmann::json::object();

    void fail(const std::string& key, nlohmann::json info) {
        pass = false;
        details[key] = std::move(info);
    }
};

// Per-protocol output validation against the oracles. Outputs are the JSON
// records produced by the corresponding protocol for nodes 0..n-1.
ValidityReport check_bfs(const Topology& topo, int source,
                         const std::vector<nlohmann::json>& outputs);
ValidityReport check_mis(const Topology& topo,
                         const std::vector<nlohmann::json>& outputs);
ValidityReport check_leader(const Topology& topo,
                            const std::vector<nlohmann::json>& outputs);
ValidityReport check_max(const Topology& topo, const std::vector<uint64_t>& inputs,
                         const std::vector<nlohmann::json>& outputs);
ValidityReport check_degree(const Topology& topo,
                            const std::vector<nlohmann::json>& outputs,
                            double ratio_lo = 0.2, double ratio_hi = 5.0);
ValidityReport check_size(const Topology& topo,
                          const std::vector<nlohmann::json>& outputs,
                          double factor = 8.0);

} // namespace addnet
