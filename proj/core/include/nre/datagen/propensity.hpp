#pragma once

#include <vector>

#include "nre/datagen/interaction_log.hpp"

namespace nre::datagen {

/// Per-news exposure propensity used for inverse-propensity weighting.
struct PropensityModel {
    std::vector<double> theta;  ///< indexed by news id, in [floor, 1]
    double floor = 0.01;
    double exponent = 0.5;
};

/// Popularity-power estimator: theta_i = max(floor, (c_i / c_max)^eta) with c_i
/// the positive count of news i. Throws DegenerateInputError when the log has
/// no positive records.
PropensityModel estimate_propensity(const InteractionLog& log, double eta, double theta_floor);

/// IPS pair weight (I_ui / theta_ui) * (1 - I_uj / theta_uj).
double ips_pair_weight(bool positive_i, double theta_i, bool positive_j, double theta_j) noexcept;

}  // namespace nre::datagen
