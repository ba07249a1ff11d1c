#include "addnet/harness/oracle.hpp"

#include <algorithm>
#include <deque>

namespace addnet {

std::vector<int> oracle_bfs_distances(const Topology& topo, int source) {
    std::vector<int> dist(size_t(topo.n()), -1);
    std::deque<int> q{source};
    dist[size_t(source)] = 0;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int u : topo.neighbors(v))
            if (dist[size_t(u)] < 0) {
                dist[size_t(u)] = dist[size_t(v)] + 1;
                q.push_back(u);
            }
    }
    return dist;
}

int oracle_eccentricity(const Topology& topo, int v) {
    auto d = oracle_bfs_distances(topo, v);
    int ecc = 0;
    for (int x : d) {
        if (x < 0) return -1; // disconnected
        ecc = std::max(ecc, x);
    }
    return ecc;
}

int oracle_diameter(const Topology& topo) {
    int d = 0;
    for (int v = 0; v < topo.n(); ++v) {
        int e = oracle_eccentricity(topo, v);
        if (e < 0) return -1;
        d = std::max(d, e);
    }
    return d;
}

bool oracle_independent(const Topology& topo, const std::vector<uint8_t>& in_set) {
    for (int v = 0; v < topo.n(); ++v)
        if (in_set[size_t(v)])
            for (int u : topo.neighbors(v))
                if (u > v && in_set[size_t(u)]) return false;
    return true;
}

bool oracle_maximal_independent(const Topology& topo, const std::vector<uint8_t>& in_set) {
    if (!oracle_independent(topo, in_set)) return false;
    for (int v = 0; v < topo.n(); ++v) {
        if (in_set[size_t(v)]) continue;
        bool covered = false;
        for (int u : topo.neighbors(v))
            if (in_set[size_t(u)]) {
                covered = true;
                break;
            }
        if (!covered) return false;
    }
    return true;
}

ValidityReport check_bfs(const Topology& topo, int source,
                         const std::vector<nlohmann::json>& outputs) {
    ValidityReport rep;
    auto dist = oracle_bfs_distances(topo, source);
    for (int v = 0; v < topo.n(); ++v) {
        const auto& o = outputs[size_t(v)];
        if (!o.contains("level")) {
            rep.fail("missing_level", {{"node", v}});
            continue;
        }
        int lvl = o.at("level").get<int>();
        if (lvl != dist[size_t(v)])
            rep.fail("wrong_level", {{"node", v}, {"got", lvl}, {"want", dist[size_t(v)]}});
        if (v == source) continue;
        if (!o.contains("parent_id")) {
            rep.fail("missing_parent", {{"node", v}});
            continue;
        }
        int parent = topo.node_of_id(o.at("parent_id").get<uint64_t>());
        if (!topo.has_edge(v, parent))
            rep.fail("parent_not_adjacent", {{"node", v}, {"parent", parent}});
        else if (dist[size_t(parent)] != dist[size_t(v)] - 1)
            rep.fail("parent_level", {{"node", v}, {"parent", parent}});
    }
    return rep;
}

ValidityReport check_mis(const Topology& topo,
                         const std::vector<nlohmann::json>& outputs) {
    ValidityReport rep;
    std::vector<uint8_t> in_set(size_t(topo.n()), 0);
    for (int v = 0; v < topo.n(); ++v) {
        const std::string s = outputs[size_t(v)].at("status").get<std::string>();
        if (s == "undecided") rep.fail("undecided", {{"node", v}});
        in_set[size_t(v)] = (s == "in_mis");
    }
    if (!oracle_independent(topo, in_set)) rep.fail("not_independent", {});
    else if (rep.pass && !oracle_maximal_independent(topo, in_set))
        rep.fail("not_maximal", {});
    return rep;
}

ValidityReport check_leader(const Topology& topo,
                            const std::vector<nlohmann::json>& outputs) {
    ValidityReport rep;
    // The rightful leader is the argmax of the drawn (r, z) pairs.
    int argmax = 0;
    uint64_t best_r = 0, best_z = 0;
    bool tie = false;
    for (int v = 0; v < topo.n(); ++v) {
        uint64_t r = outputs[size_t(v)].at("r").get<uint64_t>();
        uint64_t z = outputs[size_t(v)].at("z").get<uint64_t>();
        if (std::pair(r, z) > std::pair(best_r, best_z)) {
            best_r = r;
            best_z = z;
            argmax = v;
            tie = false;
        } else if (r == best_r && z == best_z && v != argmax) {
            tie = true;
        }
    }
    if (tie) {
        rep.fail("ambiguous_draws", {});
        return rep;
    }
    int leader_count = 0;
    for (int v = 0; v < topo.n(); ++v) {
        const auto& o = outputs[size_t(v)];
        if (o.value("is_leader", false)) ++leader_count;
        if (!o.value("terminated", true)) rep.fail("not_terminated", {{"node", v}});
        if (o.value("leader_r", uint64_t(0)) != best_r ||
            o.value("leader_z", uint64_t(0)) != best_z)
            rep.fail("wrong_leader_values", {{"node", v}});
    }
    if (leader_count != 1)
        rep.fail("leader_count", {{"count", leader_count}, {"argmax", argmax}});
    else if (rep.pass && !outputs[size_t(argmax)].value("is_leader", false))
        rep.fail("leader_not_argmax", {{"argmax", argmax}});
    return rep;
}

ValidityReport check_max(const Topology& topo, const std::vector<uint64_t>& inputs,
                         const std::vector<nlohmann::json>& outputs) {
    ValidityReport rep;
    uint64_t truth = *std::max_element(inputs.begin(), inputs.end());
    for (int v = 0; v < topo.n(); ++v) {
        uint64_t got = outputs[size_t(v)].at("max").get<uint64_t>();
        if (got != truth)
            rep.fail("wrong_max", {{"node", v}, {"got", got}, {"want", truth}});
    }
    return rep;
}

ValidityReport check_degree(const Topology& topo,
                            const std::vector<nlohmann::json>& outputs,
                            double ratio_lo, double ratio_hi) {
    ValidityReport rep;
    for (int v = 0; v < topo.n(); ++v) {
        const auto& o = outputs[size_t(v)];
        uint64_t est = o.at("degree").get<uint64_t>();
        uint64_t deg = uint64_t(topo.degree(v));
        if (o.at("exact").get<bool>()) {
            if (est != deg)
                rep.fail("exact_mismatch", {{"node", v}, {"got", est}, {"want", deg}});
        } else if (deg > 0) {
            double ratio = double(est) / double(deg);
            if (ratio < ratio_lo || ratio > ratio_hi)
                rep.fail("ratio", {{"node", v}, {"ratio", ratio}});
        }
    }
    return rep;
}

ValidityReport check_size(const Topology& topo,
                          const std::vector<nlohmann::json>& outputs,
                          double factor) {
    ValidityReport rep;
    const double n = double(topo.n());
    std::optional<uint64_t> agreed;
    for (int v = 0; v < topo.n(); ++v) {
        const auto& o = outputs[size_t(v)];
        if (!o.value("ok", false)) {
            rep.fail("flagged", {{"node", v}});
            continue;
        }
        uint64_t est = o.at("n_alg").get<uint64_t>();
        if (agreed && *agreed != est) rep.fail("disagreement", {{"node", v}});
        agreed = est;
        if (double(est) < n / factor || double(est) > n * factor)
            rep.fail("out_of_band", {{"node", v}, {"n_alg", est}});
    }
    return rep;
}

} // namespace addnet
