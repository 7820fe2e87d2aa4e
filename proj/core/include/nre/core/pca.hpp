#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nre/core/latent.hpp"

namespace nre {

struct PcaResult {
    /// n rows of k coordinates, row-major.
    std::vector<std::vector<double>> coordinates;
    /// k principal directions, each of the input dimension.
    std::vector<LatentVector> components;
    LatentVector mean;
    /// Eigenvalues of the (1/n) covariance for the k kept components.
    std::vector<double> explained_variance;
    /// explained_variance divided by the total variance.
    std::vector<double> explained_variance_ratio;
};

/// Principal component projection via covariance eigen-decomposition.
/// The largest-magnitude loading of every component is made positive.
/// Requires n >= 2 and k <= min(n, dim).
PcaResult pca_project(std::span<const LatentVector> points, std::size_t k);

}  // namespace nre
