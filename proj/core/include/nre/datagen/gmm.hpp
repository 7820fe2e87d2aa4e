#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "nre/core/latent.hpp"
#include "nre/core/rng.hpp"

namespace nre::datagen {

/// Mixture of diagonal-covariance Gaussians.
struct GmmModel {
    std::vector<double> weights;
    std::vector<LatentVector> means;
    std::vector<LatentVector> variances;  ///< per-component diagonal

    std::size_t components() const noexcept { return weights.size(); }
    std::size_t dimension() const noexcept { return means.empty() ? 0 : means.front().size(); }

    /// ln of the mixture density at x.
    double log_density(const LatentVector& x) const;
    double log_likelihood(std::span<const LatentVector> data) const;

    /// Throws FormatError when shapes disagree, weights do not sum to one or a
    /// variance is non-positive.
    void validate() const;
};

struct EmConfig {
    std::size_t max_iterations = 200;
    double tolerance = 1e-6;  ///< on the mean per-sample log-likelihood
    double variance_floor = 1e-6;
};

struct GmmFit {
    GmmModel model;
    double log_likelihood = 0.0;
    /// Total log-likelihood evaluated at each E-step (index 0 = k-means++ start).
    std::vector<double> history;
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<std::string> notes;  ///< degenerate-component reseeds
};

/// EM with k-means++ initialisation and a variance floor.
GmmFit fit_gmm(std::span<const LatentVector> data, std::size_t components, const EmConfig& config, RngStream& rng);

struct GmmDraw {
    std::size_t component = 0;
    LatentVector latent;
};

/// Component ~ Multinomial(weights), then latent ~ N(mean, diag(variance)).
GmmDraw sample_gmm(const GmmModel& model, RngStream& rng);

}  // namespace nre::datagen
