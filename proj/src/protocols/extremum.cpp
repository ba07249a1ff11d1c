#include "addnet/protocols/extremum.hpp"

namespace addnet {

namespace {
constexpr uint64_t kTagExt = 0x657874;
} // namespace

uint32_t NeighborhoodExtremum::bucket_of(uint64_t x) {
    if (x == 0) throw std::invalid_argument("bucket_of: values start at 1");
    uint32_t j = 1;
    while ((uint64_t(1) << j) < x) ++j;
    return j;
}

NeighborhoodExtremum::NeighborhoodExtremum(const Topology& topo,
                                           std::vector<uint64_t> values,
                                           uint32_t radius, Mode mode, uint64_t seed,
                                           ProtocolParams params)
    : topo_(topo), seed_(seed), radius_(radius), mode_(mode) {
    if (values.size() != size_t(topo.n()))
        throw std::invalid_argument("NeighborhoodExtremum: one value per node");
    uint32_t max_bucket = 1;
    nodes_.resize(size_t(topo.n()));
    for (int v = 0; v < topo.n(); ++v) {
        nodes_[size_t(v)].bucket = bucket_of(values[size_t(v)]);
        max_bucket = std::max(max_bucket, nodes_[size_t(v)].bucket);
        nodes_[size_t(v)].done = (radius == 0);
    }
    const uint64_t N = std::max<uint64_t>(topo.max_id(), uint64_t(topo.n()));
    code_ = BicCode::make(make_bcc(uint64_t(max_bucket) + 64, params.bound_default(N)),
                          params.bic_blocks(N));
}

std::size_t NeighborhoodExtremum::frame_bits(uint64_t) const { return code_.total_len; }

RoundAction NeighborhoodExtremum::act(int node, uint64_t round) {
    Node& nd = nodes_[size_t(node)];
    if (nd.done) return RoundAction::listen();
    Rng rng = Rng::at(seed_, uint64_t(node), round, kTagExt);
    return RoundAction::transmit_and_listen(bic_encode(code_, nd.bucket, rng));
}

void NeighborhoodExtremum::receive(int node, uint64_t round,
                                   std::span<const BitVector> frames) {
    Node& nd = nodes_[size_t(node)];
    if (nd.done) return;
    ValueSet all;
    for (const BitVector& f : frames) {
        BicDecodeInfo info = bic_decode_full(code_, f, &cache_);
        if (info.failed_blocks > 0) nd.decode_failed = true;
        all.insert(all.end(), info.values.begin(), info.values.end());
    }
    for (uint64_t b : all) {
        if (mode_ == Mode::Max) nd.bucket = std::max<uint32_t>(nd.bucket, uint32_t(b));
        else nd.bucket = std::min<uint32_t>(nd.bucket, uint32_t(b));
    }
    if (round + 1 >= radius_) nd.done = true;
}

bool NeighborhoodExtremum::done(int node) const { return nodes_[size_t(node)].done; }

nlohmann::json NeighborhoodExtremum::output(int node) const {
    const Node& nd = nodes_[size_t(node)];
    nlohmann::json j;
    j["bucket"] = nd.bucket;
    j["estimate"] = estimate_at(node);
    j["decode_failed"] = nd.decode_failed;
    return j;
}

} // namespace addnet
