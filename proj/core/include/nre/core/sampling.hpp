#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "nre/core/latent.hpp"
#include "nre/core/rng.hpp"

namespace nre {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Normal(mean, std^2) draw clamped into [lo, hi].
double sample_clipped_gaussian(double mean, double std, double lo, double hi, RngStream& rng);

/// Isotropic Gaussian around `mean`; `scale` is the per-coordinate standard deviation.
LatentVector sample_gaussian_vector(const LatentVector& mean, double scale, RngStream& rng);

/// Sum of n Bernoulli(p) trials.
std::uint64_t sample_binomial(std::uint64_t n, double p, RngStream& rng);

/// Index drawn with probability proportional to the nonnegative weights.
std::size_t sample_categorical(std::span<const double> weights, RngStream& rng);

/// `count` distinct indices from [0, n) in random order (partial Fisher-Yates).
/// Returns all n indices, shuffled, when count >= n.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count, RngStream& rng);

template <typename T>
void shuffle_in_place(std::vector<T>& items, RngStream& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform_index(i));
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace nre
