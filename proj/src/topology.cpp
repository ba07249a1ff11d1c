#include "addnet/topology.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

namespace addnet {

Topology Topology::from_edges(int n, std::vector<std::pair<int, int>> edges,
                              std::vector<uint64_t> ids) {
    if (n <= 0) throw std::invalid_argument("Topology: n must be positive");
    Topology t;
    t.n_ = n;
    t.adj_.assign(size_t(n), {});
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw std::invalid_argument("Topology: edge endpoint out of range");
        if (u == v) throw std::invalid_argument("Topology: self-loop");
        if (u > v) std::swap(u, v);
        if (!seen.insert({u, v}).second) continue;
        t.adj_[size_t(u)].push_back(v);
        t.adj_[size_t(v)].push_back(u);
    }
    t.edge_count_ = seen.size();
    for (auto& nb : t.adj_) std::sort(nb.begin(), nb.end());

    if (ids.empty()) {
        ids.resize(size_t(n));
        for (int v = 0; v < n; ++v) ids[size_t(v)] = uint64_t(v) + 1;
    }
    if (int(ids.size()) != n) throw std::invalid_argument("Topology: ids size");
    {
        std::set<uint64_t> uniq(ids.begin(), ids.end());
        if (int(uniq.size()) != n) throw std::invalid_argument("Topology: ids not unique");
        if (*uniq.begin() == 0) throw std::invalid_argument("Topology: ids must be >= 1");
    }
    t.ids_ = std::move(ids);
    t.max_id_ = *std::max_element(t.ids_.begin(), t.ids_.end());

    // Cache connectivity.
    std::vector<char> vis(size_t(n), 0);
    std::vector<int> stack = {0};
    vis[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u : t.adj_[size_t(v)])
            if (!vis[size_t(u)]) {
                vis[size_t(u)] = 1;
                ++count;
                stack.push_back(u);
            }
    }
    t.connected_ = (count == n);
    return t;
}

bool Topology::has_edge(int u, int v) const {
    const auto& nb = adj_.at(size_t(u));
    return std::binary_search(nb.begin(), nb.end(), v);
}

int Topology::node_of_id(uint64_t id) const {
    for (int v = 0; v < n_; ++v)
        if (ids_[size_t(v)] == id) return v;
    throw std::invalid_argument("Topology: unknown id");
}

nlohmann::json Topology::to_json() const {
    nlohmann::json j;
    j["n"] = n_;
    nlohmann::json edges = nlohmann::json::array();
    for (int v = 0; v < n_; ++v)
        for (int u : adj_[size_t(v)])
            if (u > v) edges.push_back({v, u});
    j["edges"] = edges;
    j["ids"] = ids_;
    return j;
}

Topology Topology::from_json(const nlohmann::json& j) {
    int n = j.at("n").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges"))
        edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    std::vector<uint64_t> ids;
    if (j.contains("ids")) ids = j.at("ids").get<std::vector<uint64_t>>();
    return from_edges(n, std::move(edges), std::move(ids));
}

Topology Topology::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("Topology::load: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
}

void Topology::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("Topology::save: cannot open " + path);
    out << to_json().dump(2) << "\n";
}

} // namespace addnet
