#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "nre/datagen/bootstrap.hpp"
#include "nre/datagen/gmm.hpp"
#include "nre/datagen/population.hpp"
#include "nre/datagen/unbiased_bpr.hpp"
#include "nre/recsys/channels.hpp"
#include "nre/recsys/training.hpp"

namespace nre::engine {

/// Named recommender strategies; each is a preset over budgets and modes.
enum class Strategy : std::uint8_t { Default, ColdAffinity, Breaking, PromoCreator, PromoTopic };

std::string_view to_string(Strategy s) noexcept;
/// Throws ValidationError listing the valid names.
Strategy parse_strategy(std::string_view name);
const std::vector<std::string>& strategy_names();

struct ChannelBudgets {
    std::size_t algorithmic = 80;
    std::size_t cold_start = 20;
    std::size_t breaking = 0;
    std::size_t promotion = 0;

    std::size_t total() const noexcept { return algorithmic + cold_start + breaking + promotion; }
};

struct SimConfig {
    std::uint64_t seed = 42;
    std::size_t num_users = 10000;
    std::size_t num_creators = 1000;
    std::size_t rounds = 100;
    std::size_t news_per_creator = 5;
    std::size_t active_rounds = 5;
    std::size_t list_length = 100;
    ChannelBudgets budgets;
    std::size_t n_click = 10;
    double p_like = 0.1;
    double delta = 0.1;
    double epsilon = 1e-8;
    datagen::HyperConfig hyper;
    recsys::TrainConfig train;

    Strategy strategy = Strategy::Default;
    recsys::ColdStartMode cold_start_mode = recsys::ColdStartMode::Random;
    recsys::PromotionMode promotion_mode = recsys::PromotionMode::None;
    std::size_t promotion_interval = 10;
    std::size_t promotion_count = 1;

    std::size_t jaccard_pair_budget = 100000;
    std::size_t jaccard_window = 0;  ///< 0 = active_rounds

    datagen::BootstrapConfig bootstrap;
    datagen::EmConfig em;
    double propensity_exponent = 0.5;
    double propensity_floor = 0.01;
    datagen::UserLatentFitConfig user_fit;

    std::size_t projection_every = 10;  ///< 0 disables projection export
    std::size_t explain_users = 6;
    std::size_t explain_top_k = 3;
    std::size_t snapshot_every = 0;  ///< 0 = final snapshot only

    std::size_t effective_jaccard_window() const noexcept { return jaccard_window ? jaccard_window : active_rounds; }

    /// Throws ValidationError naming the first violated constraint.
    void validate() const;
};

/// One documented configuration key.
struct ConfigKeyInfo {
    std::string name;
    std::string default_value;
    std::string description;
};

/// Every accepted key with its default, in documentation order.
std::vector<ConfigKeyInfo> config_keys();

using ConfigMap = std::map<std::string, std::string>;

/// Flat "key = value" text ('#' comments, blank lines ignored), or a flat JSON
/// object with the same keys when the first non-blank character is '{'.
ConfigMap parse_config_text(std::istream& in);

/// Defaults, then the strategy preset named by the "strategy" key, then every
/// other key. Unset budget_algorithmic absorbs whatever the other budgets
/// leave of list_length. Unknown keys and constraint violations raise
/// ValidationError.
SimConfig build_config(const ConfigMap& values);

SimConfig load_config(const std::filesystem::path& path);

/// Every key of `config` rendered losslessly; build_config(config_to_map(c)) == c.
ConfigMap config_to_map(const SimConfig& config);

/// "key = value" lines for every key.
std::string render_config(const SimConfig& config);

/// Canonical kebab-case flag name for a key ("num_users" -> "num-users").
std::string key_to_flag(const std::string& key);

}  // namespace nre::engine
