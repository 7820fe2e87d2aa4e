#include "nre/core/pca.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "nre/error.hpp"

namespace nre {

PcaResult pca_project(std::span<const LatentVector> points, std::size_t k) {
    const std::size_t n = points.size();
    if (n < 2) throw DegenerateInputError("pca needs at least two points");
    const std::size_t dim = points.front().size();
    if (k == 0 || k > std::min(n, dim)) throw DegenerateInputError("pca: k out of range");

    Eigen::MatrixXd data(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < n; ++i) {
        if (points[i].size() != dim) throw FormatError("pca: dimension mismatch");
        for (std::size_t c = 0; c < dim; ++c) data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = points[i][c];
    }
    const Eigen::RowVectorXd mean = data.colwise().mean();
    data.rowwise() -= mean;
    const Eigen::MatrixXd cov = (data.transpose() * data) / static_cast<double>(n);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw DegenerateInputError("pca: eigen-decomposition failed");
    // Eigen returns ascending eigenvalues.
    const Eigen::VectorXd values = solver.eigenvalues();
    Eigen::MatrixXd vectors = solver.eigenvectors();
    const double total = std::max(values.sum(), 0.0);

    PcaResult result;
    result.mean = LatentVector(std::vector<double>(mean.data(), mean.data() + dim));
    Eigen::MatrixXd basis(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(k));
    for (std::size_t c = 0; c < k; ++c) {
        const auto col = static_cast<Eigen::Index>(dim - 1 - c);
        Eigen::VectorXd v = vectors.col(col);
        Eigen::Index peak = 0;
        v.cwiseAbs().maxCoeff(&peak);
        if (v(peak) < 0.0) v = -v;
        basis.col(static_cast<Eigen::Index>(c)) = v;
        result.components.emplace_back(std::vector<double>(v.data(), v.data() + dim));
        const double ev = std::max(values(col), 0.0);
        result.explained_variance.push_back(ev);
        result.explained_variance_ratio.push_back(total > 0.0 ? ev / total : 0.0);
    }
    const Eigen::MatrixXd projected = data * basis;
    result.coordinates.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        result.coordinates[i].resize(k);
        for (std::size_t c = 0; c < k; ++c) result.coordinates[i][c] = projected(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
    }
    return result;
}

}  // namespace nre
