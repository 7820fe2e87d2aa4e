#include "nre/core/sampling.hpp"

#include <algorithm>
#include <numeric>

#include "nre/error.hpp"

namespace nre {

double sample_clipped_gaussian(double mean, double std, double lo, double hi, RngStream& rng) {
    if (std < 0.0) throw DegenerateInputError("negative standard deviation");
    if (lo > hi) throw DegenerateInputError("empty clipping interval");
    const double draw = std == 0.0 ? mean : mean + std * rng.normal();
    return std::clamp(draw, lo, hi);
}

LatentVector sample_gaussian_vector(const LatentVector& mean, double scale, RngStream& rng) {
    if (scale < 0.0) throw DegenerateInputError("negative scale");
    LatentVector out = mean;
    if (scale == 0.0) return out;
    for (double& v : out) v += scale * rng.normal();
    return out;
}

std::uint64_t sample_binomial(std::uint64_t n, double p, RngStream& rng) {
    if (p <= 0.0) return 0;
    if (p >= 1.0) return n;
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        if (rng.uniform() < p) ++hits;
    }
    return hits;
}

std::size_t sample_categorical(std::span<const double> weights, RngStream& rng) {
    if (weights.empty()) throw DegenerateInputError("categorical over an empty support");
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(total > 0.0)) throw DegenerateInputError("categorical weights sum to zero");
    const double target = rng.uniform() * total;
    double running = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        running += weights[i];
        if (target < running) return i;
    }
    // Rounding left target at the very top; return the last positive weight.
    for (std::size_t i = weights.size(); i > 0; --i) {
        if (weights[i - 1] > 0.0) return i - 1;
    }
    return weights.size() - 1;
}

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count, RngStream& rng) {
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    const std::size_t take = std::min(n, count);
    for (std::size_t i = 0; i < take; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(take);
    return pool;
}

}  // namespace nre
