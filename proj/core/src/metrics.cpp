#include "nre/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nre/error.hpp"
#include "nre/recsys/training.hpp"

namespace nre::metrics {

double gini(std::span<const double> values) {
    if (values.empty()) throw DegenerateInputError("gini of an empty array");
    std::vector<double> sorted(values.begin(), values.end());
    for (double v : sorted) {
        if (v < 0.0 || !std::isfinite(v)) throw DegenerateInputError("gini requires finite non-negative values");
    }
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    const double total = std::accumulate(sorted.begin(), sorted.end(), 0.0);
    if (total == 0.0) return 0.0;
    // sum_ij |x_i - x_j| = 2 * sum_i (2i - n + 1) x_(i) over ascending order, i from 0
    double weighted = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        weighted += (2.0 * static_cast<double>(i) - n + 1.0) * sorted[i];
    }
    return std::clamp(weighted / (n * total), 0.0, 1.0);
}

double jaccard_index(std::span<const NewsId> a, std::span<const NewsId> b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t common = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++common;
            ++ia;
            ++ib;
        }
    }
    return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

std::optional<double> jaccard_homogenization(std::span<const std::vector<NewsId>> liked_sets,
                                             std::size_t pair_budget, RngStream& rng) {
    std::vector<const std::vector<NewsId>*> sets;
    for (const auto& s : liked_sets) {
        if (!s.empty()) sets.push_back(&s);
    }
    const std::size_t m = sets.size();
    if (m < 2) return std::nullopt;
    const double pairs = static_cast<double>(m) * static_cast<double>(m - 1) / 2.0;
    double total = 0.0;
    if (pairs <= static_cast<double>(pair_budget)) {
        for (std::size_t i = 0; i + 1 < m; ++i) {
            for (std::size_t j = i + 1; j < m; ++j) total += jaccard_index(*sets[i], *sets[j]);
        }
        return total / pairs;
    }
    for (std::size_t k = 0; k < pair_budget; ++k) {
        const auto i = static_cast<std::size_t>(rng.uniform_index(m));
        auto j = static_cast<std::size_t>(rng.uniform_index(m - 1));
        if (j >= i) ++j;
        total += jaccard_index(*sets[i], *sets[j]);
    }
    return total / static_cast<double>(pair_budget);
}

Coverage coverage(const recsys::RankingModel* model, std::size_t user_count, std::span<const NewsId> active_news) {
    Coverage c;
    if (model == nullptr) return c;
    for (UserId u : model->covered_users()) {
        if (u < user_count) ++c.users;
    }
    for (NewsId n : model->covered_news()) {
        if (std::binary_search(active_news.begin(), active_news.end(), n)) ++c.news;
    }
    return c;
}

QualityStats quality_stats(std::span<const double> qualities, std::span<const double> likes) {
    if (qualities.empty()) throw DegenerateInputError("quality stats need at least one active news");
    if (qualities.size() != likes.size()) throw DegenerateInputError("quality and like arrays differ in length");
    QualityStats s;
    s.average = std::accumulate(qualities.begin(), qualities.end(), 0.0) / static_cast<double>(qualities.size());
    double weighted = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < qualities.size(); ++i) {
        weighted += qualities[i] * likes[i];
        total += likes[i];
    }
    if (total > 0.0) s.like_weighted = weighted / total;
    return s;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DegenerateInputError("pearson inputs differ in length");
    const std::size_t n = x.size();
    if (n < 2) return std::nullopt;
    const auto constant = [](std::span<const double> v) {
        return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
    };
    if (constant(x) || constant(y)) return std::nullopt;
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::optional<double> user_news_similarity(std::span<const double> event_cosines) {
    if (event_cosines.empty()) return std::nullopt;
    return std::accumulate(event_cosines.begin(), event_cosines.end(), 0.0) /
           static_cast<double>(event_cosines.size());
}

}  // namespace nre::metrics
