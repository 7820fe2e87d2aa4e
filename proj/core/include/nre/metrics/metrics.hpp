#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "nre/core/rng.hpp"
#include "nre/ids.hpp"

namespace nre::recsys {
class RankingModel;
}

namespace nre::metrics {

/// Gini index sum_ij |x_i - x_j| / (2 n^2 mean), via the sorted O(n log n)
/// form. All-zero input and single elements give 0. Throws
/// DegenerateInputError on negative values or an empty input.
double gini(std::span<const double> values);

/// |A n B| / |A u B| for sorted unique id lists; 0 when both are empty.
double jaccard_index(std::span<const NewsId> a, std::span<const NewsId> b);

/// Mean pairwise Jaccard over users whose set is non-empty. Exact when the
/// number of pairs is at most `pair_budget`, otherwise averaged over
/// `pair_budget` uniformly drawn pairs. Missing with fewer than two sets.
std::optional<double> jaccard_homogenization(std::span<const std::vector<NewsId>> liked_sets,
                                             std::size_t pair_budget, RngStream& rng);

struct Coverage {
    std::size_t users = 0;
    std::size_t news = 0;
};

/// Covered ids of the model intersected with existing users / active news.
/// A null model (cold system) covers nothing.
Coverage coverage(const recsys::RankingModel* model, std::size_t user_count, std::span<const NewsId> active_news);

struct QualityStats {
    double average = 0.0;
    std::optional<double> like_weighted;  ///< missing when no LIKEs
};

/// Throws DegenerateInputError on empty or mismatched inputs.
QualityStats quality_stats(std::span<const double> qualities, std::span<const double> likes);

/// Pearson product-moment correlation; missing when n < 2 or either
/// variable is constant.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

/// Mean of per-event user/liked-news cosines; missing for no events.
std::optional<double> user_news_similarity(std::span<const double> event_cosines);

}  // namespace nre::metrics
