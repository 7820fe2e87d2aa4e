#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nre/core/rng.hpp"
#include "nre/datagen/gmm.hpp"
#include "nre/embeddings/embedding_table.hpp"

namespace nre::datagen {

/// Dataset-free latent space: T topic means on a sphere of radius `spread`,
/// shared by users and creators, with isotropic per-topic noise.
struct BootstrapConfig {
    std::size_t topics = 10;
    std::size_t dimension = 25;
    double spread = 1.0;
    double component_std = 0.2;
    /// Topic weights are proportional to (t + 1)^-skew; 0 gives equal weights.
    double weight_skew = 0.0;
    /// Synthetic explanation words sampled per topic; 0 disables the wordbase.
    std::size_t words_per_topic = 20;
};

struct BootstrapSpace {
    GmmModel users;
    GmmModel creators;
    std::optional<embeddings::EmbeddingTable> word_table;
    std::vector<std::string> wordbase_tokens;
};

/// Means are redrawn until every pair is at least spread/2 apart.
BootstrapSpace bootstrap_latent_space(const BootstrapConfig& config, RngStream& rng);

}  // namespace nre::datagen
