#pragma once

// Brute-force reference implementations. Nothing here calls into the
// library's numeric code, so agreement is meaningful.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <set>
#include <vector>

namespace nre::oracle {

/// Pairwise Gini: sum_ij |x_i - x_j| / (2 n^2 mean).
inline double gini(const std::vector<double>& x) {
    const double n = static_cast<double>(x.size());
    double total = 0.0;
    for (double v : x) total += v;
    if (x.size() < 2 || total == 0.0) return 0.0;
    double diff = 0.0;
    for (double a : x)
        for (double b : x) diff += std::fabs(a - b);
    return diff / (2.0 * n * n * (total / n));
}

inline double jaccard(const std::vector<unsigned>& a, const std::vector<unsigned>& b) {
    const std::set<unsigned> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::size_t inter = 0;
    for (unsigned v : sa) inter += sb.count(v);
    const std::size_t uni = sa.size() + sb.size() - inter;
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

/// Mean pairwise Jaccard over non-empty sets; NaN for fewer than two.
inline double mean_pairwise_jaccard(const std::vector<std::vector<unsigned>>& sets) {
    std::vector<const std::vector<unsigned>*> live;
    for (const auto& s : sets)
        if (!s.empty()) live.push_back(&s);
    if (live.size() < 2) return std::nan("");
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < live.size(); ++i)
        for (std::size_t j = i + 1; j < live.size(); ++j, ++pairs) sum += jaccard(*live[i], *live[j]);
    return sum / static_cast<double>(pairs);
}

/// Reciprocal rank cut at 5: the positive's rank is one plus the number of
/// candidates that beat it (higher score, or equal score and smaller id).
inline double reciprocal_rank_at_5(double positive_score, unsigned positive_id,
                                   const std::vector<std::pair<double, unsigned>>& negatives) {
    std::size_t rank = 1;
    for (const auto& [s, id] : negatives)
        if (s > positive_score || (s == positive_score && id < positive_id)) ++rank;
    return rank <= 5 ? 1.0 / static_cast<double>(rank) : 0.0;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

/// Central differences of f at p, one coordinate at a time.
inline std::vector<double> numeric_gradient(const std::function<double(const std::vector<double>&)>& f,
                                            std::vector<double> p, double h = 1e-6) {
    std::vector<double> g(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double keep = p[i];
        p[i] = keep + h;
        const double up = f(p);
        p[i] = keep - h;
        const double down = f(p);
        p[i] = keep;
        g[i] = (up - down) / (2.0 * h);
    }
    return g;
}

/// ||a - b|| / max(||a||, ||b||, tiny).
inline double relative_error(const std::vector<double>& a, const std::vector<double>& b) {
    double diff = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff += (a[i] - b[i]) * (a[i] - b[i]);
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nb), 1e-300});
}

inline double stable_log_sigmoid(double x) { return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }

}  // namespace nre::oracle
