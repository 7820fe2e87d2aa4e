#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "nre/core/rng.hpp"
#include "nre/datagen/gmm.hpp"
#include "nre/datagen/interaction_log.hpp"
#include "nre/datagen/population.hpp"
#include "nre/datagen/unbiased_bpr.hpp"
#include "nre/embeddings/embedding_table.hpp"

namespace nre::datagen {

struct NewsRecord {
    NewsId id = 0;
    CreatorId creator = 0;
    std::string category;  ///< may be empty
    std::string text;
};

/// CSV with header "news_id,creator_id,category,text"; the text field runs
/// to the end of the line and may contain commas. Ids must be 0..n-1 in any
/// order. Throws ParseError / FormatError.
std::vector<NewsRecord> read_news_catalog(std::istream& in);
std::vector<NewsRecord> load_news_catalog(const std::filesystem::path& path);

struct DatasetPipelineConfig {
    double propensity_exponent = 0.5;
    double propensity_floor = 0.01;
    UserLatentFitConfig user_fit;
    EmConfig em;
    /// Mixture components when the catalog carries no categories.
    std::size_t components = 5;
    HyperConfig hyper;
    std::size_t user_count = 10000;
    std::size_t creator_count = 1000;
};

struct DatasetPipelineResult {
    SyntheticPopulation population;
    GmmFit user_mixture;
    GmmFit creator_mixture;
    std::vector<UserId> excluded_users;
    std::size_t out_of_vocabulary_tokens = 0;
    std::vector<std::string> notes;
};

/// Encodes news text, learns debiased user latents, averages creator
/// latents, fits one mixture per agent kind (one component per distinct
/// category when categories exist) and samples the synthetic population.
DatasetPipelineResult generate_from_dataset(const embeddings::EmbeddingTable& table,
                                            const std::vector<NewsRecord>& catalog, const InteractionLog& log,
                                            const DatasetPipelineConfig& config, RngStream& rng);

}  // namespace nre::datagen
