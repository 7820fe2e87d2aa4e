#include "nre/datagen/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "nre/core/math.hpp"
#include "nre/core/sampling.hpp"
#include "nre/error.hpp"

namespace nre::datagen {
namespace {

double log_gaussian_diag(const LatentVector& x, const LatentVector& mean, const LatentVector& var) {
    const double log_two_pi = std::log(2.0 * std::numbers::pi);
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double d = x[k] - mean[k];
        s += log_two_pi + std::log(var[k]) + d * d / var[k];
    }
    return -0.5 * s;
}

double squared_distance(const LatentVector& a, const LatentVector& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

// Fills resp (n x T, row-major) with posterior responsibilities; returns total log-likelihood.
double expectation(const GmmModel& model, std::span<const LatentVector> data, std::vector<double>& resp,
                   std::vector<double>& point_ll) {
    const std::size_t n = data.size();
    const std::size_t t_count = model.components();
    resp.assign(n * t_count, 0.0);
    point_ll.assign(n, 0.0);
    std::vector<double> logs(t_count);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t t = 0; t < t_count; ++t) {
            logs[t] = model.weights[t] > 0.0
                          ? std::log(model.weights[t]) + log_gaussian_diag(data[i], model.means[t], model.variances[t])
                          : -std::numeric_limits<double>::infinity();
        }
        const double lse = log_sum_exp(logs);
        point_ll[i] = lse;
        total += lse;
        for (std::size_t t = 0; t < t_count; ++t) resp[i * t_count + t] = std::exp(logs[t] - lse);
    }
    return total;
}

void maximization(GmmModel& model, std::span<const LatentVector> data, const std::vector<double>& resp,
                  double variance_floor, std::vector<double>& mass) {
    const std::size_t n = data.size();
    const std::size_t t_count = model.components();
    const std::size_t dim = data.front().size();
    mass.assign(t_count, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t t = 0; t < t_count; ++t) mass[t] += resp[i * t_count + t];
    }
    for (std::size_t t = 0; t < t_count; ++t) {
        if (mass[t] <= 0.0) continue;
        LatentVector mean(dim);
        for (std::size_t i = 0; i < n; ++i) {
            const double r = resp[i * t_count + t];
            if (r == 0.0) continue;
            for (std::size_t k = 0; k < dim; ++k) mean[k] += r * data[i][k];
        }
        mean *= 1.0 / mass[t];
        LatentVector var(dim);
        for (std::size_t i = 0; i < n; ++i) {
            const double r = resp[i * t_count + t];
            if (r == 0.0) continue;
            for (std::size_t k = 0; k < dim; ++k) {
                const double d = data[i][k] - mean[k];
                var[k] += r * d * d;
            }
        }
        for (std::size_t k = 0; k < dim; ++k) var[k] = std::max(var[k] / mass[t], variance_floor);
        model.means[t] = std::move(mean);
        model.variances[t] = std::move(var);
        model.weights[t] = mass[t] / static_cast<double>(n);
    }
}

std::vector<std::size_t> kmeans_plus_plus(std::span<const LatentVector> data, std::size_t k, RngStream& rng) {
    std::vector<std::size_t> centers;
    centers.push_back(static_cast<std::size_t>(rng.uniform_index(data.size())));
    std::vector<double> d2(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) d2[i] = squared_distance(data[i], data[centers[0]]);
    while (centers.size() < k) {
        const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
        std::size_t next = 0;
        if (total > 0.0) {
            next = sample_categorical(d2, rng);
        } else {
            next = static_cast<std::size_t>(rng.uniform_index(data.size()));
        }
        centers.push_back(next);
        for (std::size_t i = 0; i < data.size(); ++i) d2[i] = std::min(d2[i], squared_distance(data[i], data[next]));
    }
    return centers;
}

}  // namespace

double GmmModel::log_density(const LatentVector& x) const {
    std::vector<double> logs(components());
    for (std::size_t t = 0; t < components(); ++t) {
        logs[t] = weights[t] > 0.0 ? std::log(weights[t]) + log_gaussian_diag(x, means[t], variances[t])
                                   : -std::numeric_limits<double>::infinity();
    }
    return log_sum_exp(logs);
}

double GmmModel::log_likelihood(std::span<const LatentVector> data) const {
    double total = 0.0;
    for (const auto& x : data) total += log_density(x);
    return total;
}

void GmmModel::validate() const {
    if (weights.empty()) throw FormatError("gmm has no components");
    if (means.size() != weights.size() || variances.size() != weights.size()) {
        throw FormatError("gmm component arrays disagree in length");
    }
    const std::size_t dim = means.front().size();
    double total = 0.0;
    for (std::size_t t = 0; t < weights.size(); ++t) {
        if (!(weights[t] >= 0.0)) throw FormatError("gmm weight is negative");
        total += weights[t];
        if (means[t].size() != dim || variances[t].size() != dim) throw FormatError("gmm dimension mismatch");
        for (double v : variances[t]) {
            if (!(v > 0.0)) throw FormatError("gmm variance must be positive");
        }
    }
    if (std::abs(total - 1.0) > 1e-9) throw FormatError("gmm weights do not sum to one");
}

GmmFit fit_gmm(std::span<const LatentVector> data, std::size_t components, const EmConfig& config, RngStream& rng) {
    if (components == 0) throw DegenerateInputError("gmm needs at least one component");
    if (data.size() < components) throw DegenerateInputError("fewer samples than gmm components");
    const std::size_t n = data.size();
    const std::size_t dim = data.front().size();
    for (const auto& x : data) {
        if (x.size() != dim) throw FormatError("gmm input dimension mismatch");
    }

    // Global per-coordinate variance, used to start components and reseed degenerate ones.
    const LatentVector global_mean = mean_of(data);
    LatentVector global_var(dim);
    for (const auto& x : data) {
        for (std::size_t k = 0; k < dim; ++k) {
            const double d = x[k] - global_mean[k];
            global_var[k] += d * d;
        }
    }
    for (double& v : global_var) v = std::max(v / static_cast<double>(n), config.variance_floor);

    GmmFit fit;
    GmmModel& model = fit.model;
    model.weights.assign(components, 1.0 / static_cast<double>(components));
    model.means.assign(components, LatentVector(dim));
    model.variances.assign(components, global_var);

    // Hard assignment to k-means++ seeds, followed by one M-step.
    const auto centers = kmeans_plus_plus(data, components, rng);
    std::vector<double> resp(n * components, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < components; ++t) {
            const double d = squared_distance(data[i], data[centers[t]]);
            if (d < best_d) {
                best_d = d;
                best = t;
            }
        }
        resp[i * components + best] = 1.0;
    }
    std::vector<double> mass;
    for (std::size_t t = 0; t < components; ++t) model.means[t] = data[centers[t]];
    maximization(model, data, resp, config.variance_floor, mass);

    std::vector<double> point_ll;
    double previous = -std::numeric_limits<double>::infinity();
    for (std::size_t iter = 0; iter < config.max_iterations; ++iter) {
        const double ll = expectation(model, data, resp, point_ll);
        fit.history.push_back(ll);
        fit.log_likelihood = ll;
        if (iter > 0 && (ll - previous) / static_cast<double>(n) < config.tolerance) {
            fit.converged = true;
            break;
        }
        previous = ll;
        maximization(model, data, resp, config.variance_floor, mass);
        ++fit.iterations;

        for (std::size_t t = 0; t < components; ++t) {
            if (mass[t] > 1e-10) continue;
            const auto worst = static_cast<std::size_t>(
                std::min_element(point_ll.begin(), point_ll.end()) - point_ll.begin());
            model.means[t] = data[worst];
            model.variances[t] = global_var;
            model.weights[t] = 1.0 / static_cast<double>(n);
            point_ll[worst] = std::numeric_limits<double>::infinity();
            fit.notes.push_back("iteration " + std::to_string(iter) + ": component " + std::to_string(t) +
                                " lost its mass; reseeded at sample " + std::to_string(worst));
            // A reseed breaks the monotone sequence; restart the convergence test.
            previous = -std::numeric_limits<double>::infinity();
        }
        const double wsum = std::accumulate(model.weights.begin(), model.weights.end(), 0.0);
        for (double& w : model.weights) w /= wsum;
    }
    if (!fit.converged) fit.log_likelihood = model.log_likelihood(data);
    return fit;
}

GmmDraw sample_gmm(const GmmModel& model, RngStream& rng) {
    GmmDraw draw;
    draw.component = model.components() == 1 ? 0 : sample_categorical(model.weights, rng);
    const auto& mean = model.means[draw.component];
    const auto& var = model.variances[draw.component];
    draw.latent = mean;
    for (std::size_t k = 0; k < mean.size(); ++k) draw.latent[k] += std::sqrt(var[k]) * rng.normal();
    return draw;
}

}  // namespace nre::datagen
