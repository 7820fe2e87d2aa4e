#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nre/core/latent.hpp"
#include "nre/core/matrix.hpp"
#include "nre/core/rng.hpp"
#include "nre/datagen/interaction_log.hpp"
#include "nre/datagen/propensity.hpp"

namespace nre::datagen {

struct UserLatentFitConfig {
    double learning_rate = 0.01;
    std::size_t batch_size = 1024;
    std::size_t epochs = 30;
    std::size_t negative_ratio = 9;
    double l2 = 1e-4;
    double init_std = 0.1;
};

/// One (user, positive news, negative news) triple with its IPS weight.
struct WeightedPair {
    UserId user = 0;
    NewsId positive = 0;
    NewsId negative = 0;
    double weight = 1.0;
};

/// Debiased pairwise objective, maximised over the user matrix:
///   (1/|D|) sum_D w * ln sigma(u.n_i - u.n_j) - l2 * ||U||^2
/// with news latents held fixed.
double unbiased_bpr_objective(const DenseMatrix& users, std::span<const LatentVector> news,
                              std::span<const WeightedPair> pairs, double l2);

/// Gradient of unbiased_bpr_objective with respect to the user matrix.
DenseMatrix unbiased_bpr_gradient(const DenseMatrix& users, std::span<const LatentVector> news,
                                  std::span<const WeightedPair> pairs, double l2);

/// Samples `negative_ratio` negatives per positive record, uniformly from news
/// the user has no positive record for, and attaches the IPS weight.
std::vector<WeightedPair> build_weighted_pairs(const InteractionLog& log, const PropensityModel& propensity,
                                               std::size_t negative_ratio, RngStream& rng);

struct UserLatentFit {
    /// One row per user id in the log; rows of excluded users stay zero.
    DenseMatrix users;
    std::vector<UserId> retained_users;
    std::vector<UserId> excluded_users;  ///< users with zero positive records
    std::vector<double> epoch_objective;  ///< full objective after each epoch
};

/// Learns user latents by stochastic (adaptive-moment) gradient ascent on the
/// debiased pairwise objective; news latents are not trained.
UserLatentFit fit_unbiased_bpr(const InteractionLog& log, std::span<const LatentVector> news_latents,
                               const PropensityModel& propensity, const UserLatentFitConfig& config,
                               RngStream& rng);

/// Average of each creator's news latents. Throws DegenerateInputError for a
/// creator without news.
std::vector<LatentVector> creator_latents_from_news(std::span<const std::vector<LatentVector>> news_by_creator);

}  // namespace nre::datagen
