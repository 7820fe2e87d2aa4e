#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

#include "nre/core/latent.hpp"
#include "nre/core/rng.hpp"
#include "nre/datagen/gmm.hpp"

namespace nre::datagen {

struct ClippedNormal {
    double mean = 0.5;
    double std = 0.1;
};

/// Distributions of the per-agent behavioural hyper-parameters.
struct HyperConfig {
    ClippedNormal threshold{0.3, 0.1};
    ClippedNormal alpha{0.5, 0.1};
    ClippedNormal user_concentration{0.5, 0.1};
    ClippedNormal creator_concentration{0.5, 0.1};
};

struct SyntheticUser {
    LatentVector latent;
    double threshold = 0.0;
    double alpha = 0.0;
    double concentration = 0.0;
    std::size_t component = 0;
};

struct SyntheticCreator {
    LatentVector latent;
    double concentration = 0.0;
    std::size_t component = 0;
};

struct SyntheticPopulation {
    std::vector<SyntheticUser> users;
    std::vector<SyntheticCreator> creators;
    GmmModel user_model;
    GmmModel creator_model;

    std::size_t dimension() const noexcept { return user_model.dimension(); }
};

/// Threshold, alpha and user concentration are clipped at zero; creator
/// concentration is clipped into [0, 1].
SyntheticPopulation sample_population(const GmmModel& users, const GmmModel& creators, std::size_t user_count,
                                      std::size_t creator_count, const HyperConfig& hyper, RngStream& rng);

/// Versioned JSON population file.
void save_population(const std::filesystem::path& path, const SyntheticPopulation& population);
SyntheticPopulation load_population(const std::filesystem::path& path);

}  // namespace nre::datagen
