#include "addnet/harness/gen.hpp"

#include <cmath>
#include <stdexcept>

namespace addnet {

namespace {
constexpr uint64_t kTagIds = 0x696473;
constexpr uint64_t kTagEdges = 0x656467;

std::vector<uint64_t> shuffled_ids(int n, uint64_t seed) {
    std::vector<uint64_t> ids(size_t(n));
    for (int i = 0; i < n; ++i) ids[size_t(i)] = uint64_t(i) + 1;
    Rng rng = Rng::at(seed, 0, 0, kTagIds);
    for (int i = n - 1; i > 0; --i)
        std::swap(ids[size_t(i)], ids[size_t(rng.below(uint64_t(i) + 1))]);
    return ids;
}
} // namespace

Topology gen_clique(int n, uint64_t seed) {
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return Topology::from_edges(n, std::move(edges), shuffled_ids(n, seed));
}

Topology gen_path(int n, uint64_t seed) {
    std::vector<std::pair<int, int>> edges;
    for (int v = 1; v < n; ++v) edges.emplace_back(v - 1, v);
    return Topology::from_edges(n, std::move(edges), shuffled_ids(n, seed));
}

Topology gen_grid(int rows, int cols, uint64_t seed) {
    if (rows <= 0 || cols <= 0) throw std::invalid_argument("gen_grid: bad dims");
    auto at = [cols](int r, int c) { return r * cols + c; };
    std::vector<std::pair<int, int>> edges;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.emplace_back(at(r, c), at(r, c + 1));
            if (r + 1 < rows) edges.emplace_back(at(r, c), at(r + 1, c));
        }
    return Topology::from_edges(rows * cols, std::move(edges),
                                shuffled_ids(rows * cols, seed));
}

Topology gen_star(int n, uint64_t seed) {
    std::vector<std::pair<int, int>> edges;
    for (int v = 1; v < n; ++v) edges.emplace_back(0, v);
    return Topology::from_edges(n, std::move(edges), shuffled_ids(n, seed));
}

Topology gen_gnp(int n, double p, uint64_t seed, int max_retries) {
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        Rng rng = Rng::at(seed, uint64_t(attempt), 0, kTagEdges);
        std::vector<std::pair<int, int>> edges;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng.bernoulli(p)) edges.emplace_back(u, v);
        Topology t = Topology::from_edges(n, std::move(edges), shuffled_ids(n, seed));
        if (t.connected() || n == 1) return t;
    }
    throw std::runtime_error("gen_gnp: connectivity retries exhausted");
}

Topology gen_tree(int n, uint64_t seed) {
    Rng rng = Rng::at(seed, 0, 0, kTagEdges);
    std::vector<std::pair<int, int>> edges;
    for (int v = 1; v < n; ++v)
        edges.emplace_back(int(rng.below(uint64_t(v))), v);
    return Topology::from_edges(n, std::move(edges), shuffled_ids(n, seed));
}

Topology gen_topology(const std::string& family, int n, double p, uint64_t seed) {
    if (family == "clique") return gen_clique(n, seed);
    if (family == "path") return gen_path(n, seed);
    if (family == "star") return gen_star(n, seed);
    if (family == "gnp") return gen_gnp(n, p, seed);
    if (family == "tree") return gen_tree(n, seed);
    if (family == "grid") {
        int side = int(std::lround(std::sqrt(double(n))));
        if (side * side != n)
            throw std::invalid_argument("gen_topology: grid needs a square n");
        return gen_grid(side, side, seed);
    }
    if (family.rfind("grid:", 0) == 0) {
        auto spec = family.substr(5);
        auto x = spec.find('x');
        if (x == std::string::npos) throw std::invalid_argument("grid:RxC expected");
        return gen_grid(std::stoi(spec.substr(0, x)), std::stoi(spec.substr(x + 1)), seed);
    }
    throw std::invalid_argument("gen_topology: unknown family " + family);
}

} // namespace addnet
