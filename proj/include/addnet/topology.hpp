#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace addnet {

// Undirected simple graph over node indices [0, n); each node carries a
// unique application-level id. Connectivity is computed once and cached.
class Topology {
public:
    static Topology from_edges(int n, std::vector<std::pair<int, int>> edges,
                               std::vector<uint64_t> ids = {});

    int n() const { return n_; }
    const std::vector<int>& neighbors(int v) const { return adj_.at(size_t(v)); }
    int degree(int v) const { return int(adj_.at(size_t(v)).size()); }
    uint64_t id(int v) const { return ids_.at(size_t(v)); }
    const std::vector<uint64_t>& ids() const { return ids_; }
    uint64_t max_id() const { return max_id_; }
    bool connected() const { return connected_; }
    std::size_t edge_count() const { return edge_count_; }
    bool has_edge(int u, int v) const;

    // Node index holding a given id (ids are unique).
    int node_of_id(uint64_t id) const;

    nlohmann::json to_json() const;
    static Topology from_json(const nlohmann::json& j);
    static Topology load(const std::string& path);
    void save(const std::string& path) const;

private:
    int n_ = 0;
    std::vector<std::vector<int>> adj_;
    std::vector<uint64_t> ids_;
    uint64_t max_id_ = 0;
    bool connected_ = false;
    std::size_t edge_count_ = 0;
};

} // namespace addnet
