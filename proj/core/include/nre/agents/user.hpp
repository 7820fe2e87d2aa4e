#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nre/agents/types.hpp"
#include "nre/core/rng.hpp"

namespace nre::agents {

/// Sequential sampling without replacement from softmax(scores), renormalised
/// after every draw. Returns positions into `scores`; all of them when
/// n_click >= scores.size().
std::vector<std::size_t> sample_clicks(std::span<const double> scores, std::size_t n_click, RngStream& rng);

/// CLICK policy: scores are rho^U * cosine(user, news) over the list.
std::vector<std::size_t> user_click(const UserState& user, std::span<const NewsId> list,
                                    const std::vector<NewsItem>& news, std::size_t n_click, RngStream& rng);

struct LikeDecision {
    bool liked = false;
    double utility = 0.0;
    double cosine = 0.0;
};

/// Reading utility alpha * cos + (1 - alpha) * Q / Q_max, liked when it
/// exceeds the user's threshold.
LikeDecision user_like(const UserState& user, const NewsItem& item, double max_quality);

/// Normaliser ln(K * N + 1) for the quality term.
double max_quality(std::size_t news_per_creator, std::size_t user_count) noexcept;

struct DriftTerm {
    const LatentVector* news_latent = nullptr;
    bool liked = false;
    double utility = 0.0;
};

/// Batch interest drift from the round-start latent:
///   h += sum_j I_j * delta * unit(n_j - h) * exp(-rho / (max(U_j, 0) + eps))
/// with I_j = +1 for LIKE and -1 otherwise.
LatentVector user_drift(const LatentVector& latent, double concentration, std::span<const DriftTerm> clicked,
                        double delta, double epsilon);

}  // namespace nre::agents
