#include "nre/datagen/propensity.hpp"

#include <algorithm>
#include <cmath>

#include "nre/error.hpp"

namespace nre::datagen {

PropensityModel estimate_propensity(const InteractionLog& log, double eta, double theta_floor) {
    if (eta < 0.0 || eta > 1.0) throw DegenerateInputError("propensity exponent must lie in [0, 1]");
    if (!(theta_floor > 0.0 && theta_floor <= 1.0)) throw DegenerateInputError("propensity floor must lie in (0, 1]");
    std::vector<double> counts(log.news_count, 0.0);
    for (const auto& rec : log.records) {
        if (rec.positive) counts[rec.news] += 1.0;
    }
    const double peak = counts.empty() ? 0.0 : *std::max_element(counts.begin(), counts.end());
    if (peak <= 0.0) throw DegenerateInputError("interaction log has no positive records");

    PropensityModel model;
    model.floor = theta_floor;
    model.exponent = eta;
    model.theta.resize(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        // pow(0, 0) is 1, so eta = 0 disables debiasing even for unseen news.
        model.theta[i] = std::max(theta_floor, std::pow(counts[i] / peak, eta));
    }
    return model;
}

double ips_pair_weight(bool positive_i, double theta_i, bool positive_j, double theta_j) noexcept {
    const double ii = positive_i ? 1.0 : 0.0;
    const double ij = positive_j ? 1.0 : 0.0;
    return (ii / theta_i) * (1.0 - ij / theta_j);
}

}  // namespace nre::datagen
