#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace streamgen {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; good avalanche for seed derivation.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent seed from (base seed, stream id). Every stochastic
/// operator and every worker gets its own derived seed so that adding one
/// does not perturb the draws of the others.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream_id) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream_id + 0x51ed2701ULL));
}

/// Categorical sampler over fixed weights. Implemented by hand (cumulative
/// sums + one uniform draw) so that draws depend only on the normalized
/// probabilities: scaling all weights by a positive constant leaves the
/// sampled sequence byte-identical.
class Categorical {
public:
    explicit Categorical(std::span<const double> weights) { reset(weights); }

    void reset(std::span<const double> weights) {
        cumulative_.assign(weights.begin(), weights.end());
        double total = 0.0;
        for (double w : weights) total += w;
        double acc = 0.0;
        for (auto& c : cumulative_) {
            acc += c / total;
            c = acc;
        }
        cumulative_.back() = 1.0;  // guard against rounding
    }

    std::size_t operator()(Rng& rng) const {
        double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        for (std::size_t i = 0; i + 1 < cumulative_.size(); ++i)
            if (u < cumulative_[i]) return i;
        return cumulative_.size() - 1;
    }

    std::size_t size() const { return cumulative_.size(); }

private:
    std::vector<double> cumulative_;
};

}  // namespace streamgen
