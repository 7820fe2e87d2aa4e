#include "nre/engine/config.hpp"

#include <algorithm>
#include <charconv>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nre/error.hpp"

namespace nre::engine {

namespace {

struct Strategies {
    Strategy value;
    const char* name;
};

constexpr Strategies kStrategies[] = {
    {Strategy::Default, "default"},           {Strategy::ColdAffinity, "cold-affinity"},
    {Strategy::Breaking, "breaking"},         {Strategy::PromoCreator, "promo-creator"},
    {Strategy::PromoTopic, "promo-topic"},
};

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& key, const std::string& text) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v))
        throw ValidationError(key, "expected a finite number, got '" + text + "'");
    return v;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
    if (text.empty()) throw ValidationError(key, "expected a non-negative integer, got ''");
    if (text.front() == '-') throw ValidationError(key, "must be non-negative, got '" + text + "'");
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
    if (end != text.c_str() + text.size() || errno == ERANGE || text.front() == '+')
        throw ValidationError(key, "expected a non-negative integer, got '" + text + "'");
    return v;
}

using Setter = std::function<void(SimConfig&, const std::string&)>;
using Getter = std::function<std::string(const SimConfig&)>;

struct Key {
    std::string name;
    std::string description;
    Setter set;
    Getter get;
};

Key count(std::string name, std::function<std::size_t&(SimConfig&)> ref, std::string description) {
    const std::string key = name;
    auto cref = ref;
    return {std::move(name), std::move(description),
            [key, ref](SimConfig& c, const std::string& v) { ref(c) = static_cast<std::size_t>(parse_unsigned(key, v)); },
            [cref](const SimConfig& c) { return std::to_string(cref(const_cast<SimConfig&>(c))); }};
}

Key real(std::string name, std::function<double&(SimConfig&)> ref, std::string description) {
    const std::string key = name;
    auto cref = ref;
    return {std::move(name), std::move(description),
            [key, ref](SimConfig& c, const std::string& v) { ref(c) = parse_double(key, v); },
            [cref](const SimConfig& c) { return format_double(cref(const_cast<SimConfig&>(c))); }};
}

#define NRE_FIELD(expr) [](SimConfig& c) -> decltype(auto) { return (c.expr); }

std::string cold_name(recsys::ColdStartMode m) { return m == recsys::ColdStartMode::Random ? "random" : "affinity"; }

std::string promo_name(recsys::PromotionMode m) {
    switch (m) {
    case recsys::PromotionMode::None: return "none";
    case recsys::PromotionMode::Creator: return "creator";
    case recsys::PromotionMode::Topic: return "topic";
    }
    return "none";
}

const std::vector<Key>& registry() {
    static const std::vector<Key> keys = [] {
        std::vector<Key> k;
        k.push_back({"strategy", "recommender preset: default, cold-affinity, breaking, promo-creator, promo-topic",
                     [](SimConfig& c, const std::string& v) { c.strategy = parse_strategy(v); },
                     [](const SimConfig& c) { return std::string(to_string(c.strategy)); }});
        k.push_back({"seed", "master seed",
                     [](SimConfig& c, const std::string& v) { c.seed = parse_unsigned("seed", v); },
                     [](const SimConfig& c) { return std::to_string(c.seed); }});
        k.push_back(count("num_users", NRE_FIELD(num_users), "number of users"));
        k.push_back(count("num_creators", NRE_FIELD(num_creators), "number of creators"));
        k.push_back(count("rounds", NRE_FIELD(rounds), "rounds after initialisation"));
        k.push_back(count("news_per_creator", NRE_FIELD(news_per_creator), "news each creator publishes per round"));
        k.push_back(count("active_rounds", NRE_FIELD(active_rounds), "rounds a news item stays recommendable"));
        k.push_back(count("list_length", NRE_FIELD(list_length), "recommendation list length"));
        k.push_back(count("budget_algorithmic", NRE_FIELD(budgets.algorithmic),
                          "slots for the learned ranker (default: what the other budgets leave)"));
        k.push_back(count("budget_cold_start", NRE_FIELD(budgets.cold_start), "slots for fresh news"));
        k.push_back(count("budget_breaking", NRE_FIELD(budgets.breaking), "slots for yesterday's most-liked news"));
        k.push_back(count("budget_promotion", NRE_FIELD(budgets.promotion), "slots for promoted creators or topics"));
        k.push_back(count("n_click", NRE_FIELD(n_click), "clicks per user per round"));
        k.push_back(real("p_like", NRE_FIELD(p_like), "like probability for the initial creator counts"));
        k.push_back(real("drift_delta", NRE_FIELD(delta), "latent step size"));
        k.push_back(real("epsilon", NRE_FIELD(epsilon), "stabiliser in denominators"));
        k.push_back(real("threshold_mean", NRE_FIELD(hyper.threshold.mean), "like threshold mean"));
        k.push_back(real("threshold_std", NRE_FIELD(hyper.threshold.std), "like threshold std"));
        k.push_back(real("alpha_mean", NRE_FIELD(hyper.alpha.mean), "relevance weight mean"));
        k.push_back(real("alpha_std", NRE_FIELD(hyper.alpha.std), "relevance weight std"));
        k.push_back(real("user_concentration_mean", NRE_FIELD(hyper.user_concentration.mean), "user concentration mean"));
        k.push_back(real("user_concentration_std", NRE_FIELD(hyper.user_concentration.std), "user concentration std"));
        k.push_back(real("creator_concentration_mean", NRE_FIELD(hyper.creator_concentration.mean),
                         "creator concentration mean"));
        k.push_back(real("creator_concentration_std", NRE_FIELD(hyper.creator_concentration.std),
                         "creator concentration std"));
        k.push_back(real("learning_rate", NRE_FIELD(train.learning_rate), "ranker step size"));
        k.push_back(count("batch_size", NRE_FIELD(train.batch_size), "ranker mini-batch size"));
        k.push_back(count("max_epochs", NRE_FIELD(train.max_epochs), "ranker epoch cap"));
        k.push_back(count("patience", NRE_FIELD(train.patience), "epochs without validation gain before stopping"));
        k.push_back(count("negative_ratio", NRE_FIELD(train.negative_ratio), "negatives per positive"));
        k.push_back(real("split_train", NRE_FIELD(train.split.train), "training fraction of positives"));
        k.push_back(real("split_validation", NRE_FIELD(train.split.validation), "validation fraction"));
        k.push_back(real("split_test", NRE_FIELD(train.split.test), "test fraction"));
        k.push_back(count("embed_dim", NRE_FIELD(train.embed_dim), "ranker embedding width"));
        k.push_back(real("l2", NRE_FIELD(train.l2), "ranker weight decay"));
        k.push_back(count("mrr_candidates", NRE_FIELD(train.mrr_candidates), "candidates per ranking evaluation"));
        k.push_back(real("init_std", NRE_FIELD(train.init_std), "ranker initialisation std"));
        k.push_back({"cold_start_mode", "random or affinity",
                     [](SimConfig& c, const std::string& v) {
                         if (v == "random") c.cold_start_mode = recsys::ColdStartMode::Random;
                         else if (v == "affinity") c.cold_start_mode = recsys::ColdStartMode::Affinity;
                         else throw ValidationError("cold_start_mode", "expected random or affinity, got '" + v + "'");
                     },
                     [](const SimConfig& c) { return cold_name(c.cold_start_mode); }});
        k.push_back({"promotion_mode", "none, creator or topic",
                     [](SimConfig& c, const std::string& v) {
                         if (v == "none") c.promotion_mode = recsys::PromotionMode::None;
                         else if (v == "creator") c.promotion_mode = recsys::PromotionMode::Creator;
                         else if (v == "topic") c.promotion_mode = recsys::PromotionMode::Topic;
                         else throw ValidationError("promotion_mode", "expected none, creator or topic, got '" + v + "'");
                     },
                     [](const SimConfig& c) { return promo_name(c.promotion_mode); }});
        k.push_back(count("promotion_interval", NRE_FIELD(promotion_interval), "rounds between promotion draws"));
        k.push_back(count("promotion_count", NRE_FIELD(promotion_count), "creators or topics promoted per draw"));
        k.push_back(count("jaccard_pair_budget", NRE_FIELD(jaccard_pair_budget),
                          "user pairs evaluated exactly before sampling"));
        k.push_back(count("jaccard_window", NRE_FIELD(jaccard_window), "rounds of likes per user set (0: active_rounds)"));
        k.push_back(count("latent_dim", NRE_FIELD(bootstrap.dimension), "latent width of the bootstrap space"));
        k.push_back(count("bootstrap_topics", NRE_FIELD(bootstrap.topics), "mixture components of the bootstrap space"));
        k.push_back(real("bootstrap_spread", NRE_FIELD(bootstrap.spread), "std of bootstrap topic centres"));
        k.push_back(real("bootstrap_component_std", NRE_FIELD(bootstrap.component_std),
                         "per-axis std inside a bootstrap topic"));
        k.push_back(real("bootstrap_weight_skew", NRE_FIELD(bootstrap.weight_skew), "topic weight exponent"));
        k.push_back(count("bootstrap_words_per_topic", NRE_FIELD(bootstrap.words_per_topic),
                          "synthetic explanation words per topic"));
        k.push_back(real("propensity_exponent", NRE_FIELD(propensity_exponent), "popularity exponent of exposure"));
        k.push_back(real("propensity_floor", NRE_FIELD(propensity_floor), "minimum exposure propensity"));
        k.push_back(count("em_max_iterations", NRE_FIELD(em.max_iterations), "mixture fit iteration cap"));
        k.push_back(real("em_tolerance", NRE_FIELD(em.tolerance), "mixture fit per-sample gain threshold"));
        k.push_back(real("em_variance_floor", NRE_FIELD(em.variance_floor), "minimum component variance"));
        k.push_back(real("user_fit_learning_rate", NRE_FIELD(user_fit.learning_rate), "user latent fit step size"));
        k.push_back(count("user_fit_batch_size", NRE_FIELD(user_fit.batch_size), "user latent fit batch size"));
        k.push_back(count("user_fit_epochs", NRE_FIELD(user_fit.epochs), "user latent fit epochs"));
        k.push_back(count("user_fit_negative_ratio", NRE_FIELD(user_fit.negative_ratio),
                          "negatives per positive in the user latent fit"));
        k.push_back(real("user_fit_l2", NRE_FIELD(user_fit.l2), "user latent weight decay"));
        k.push_back(count("projection_every", NRE_FIELD(projection_every), "rounds between projections (0: off)"));
        k.push_back(count("explain_users", NRE_FIELD(explain_users), "users per explanation export"));
        k.push_back(count("explain_top_k", NRE_FIELD(explain_top_k), "words per explained user"));
        k.push_back(count("snapshot_every", NRE_FIELD(snapshot_every), "rounds between snapshots (0: final only)"));
        return k;
    }();
    return keys;
}

#undef NRE_FIELD

const Key* find_key(const std::string& name) {
    for (const auto& k : registry())
        if (k.name == name) return &k;
    return nullptr;
}

void apply_preset(SimConfig& c, Strategy s) {
    c.strategy = s;
    c.budgets = ChannelBudgets{};
    c.cold_start_mode = recsys::ColdStartMode::Random;
    c.promotion_mode = recsys::PromotionMode::None;
    switch (s) {
    case Strategy::Default: break;
    case Strategy::ColdAffinity: c.cold_start_mode = recsys::ColdStartMode::Affinity; break;
    case Strategy::Breaking: c.budgets.breaking = 20; break;
    case Strategy::PromoCreator:
        c.budgets.promotion = 20;
        c.promotion_mode = recsys::PromotionMode::Creator;
        break;
    case Strategy::PromoTopic:
        c.budgets.promotion = 20;
        c.promotion_mode = recsys::PromotionMode::Topic;
        break;
    }
}

void require(bool ok, const char* key, const std::string& what) {
    if (!ok) throw ValidationError(key, what);
}

}  // namespace

std::string_view to_string(Strategy s) noexcept {
    for (const auto& entry : kStrategies)
        if (entry.value == s) return entry.name;
    return "default";
}

Strategy parse_strategy(std::string_view name) {
    for (const auto& entry : kStrategies)
        if (name == entry.name) return entry.value;
    std::string valid;
    for (const auto& n : strategy_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw ValidationError("strategy", "unknown strategy '" + std::string(name) + "' (valid: " + valid + ")");
}

const std::vector<std::string>& strategy_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& entry : kStrategies) out.emplace_back(entry.name);
        return out;
    }();
    return names;
}

void SimConfig::validate() const {
    require(num_users > 0, "num_users", "must be positive");
    require(num_creators > 0, "num_creators", "must be positive");
    require(rounds > 0, "rounds", "must be positive");
    require(news_per_creator > 0, "news_per_creator", "must be positive");
    require(active_rounds > 0, "active_rounds", "must be positive");
    require(list_length > 0, "list_length", "must be positive");
    require(n_click > 0, "n_click", "must be positive");
    if (budgets.total() != list_length) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "channel budgets sum to %zu (%zu+%zu+%zu+%zu) but list_length is %zu",
                      budgets.total(), budgets.algorithmic, budgets.cold_start, budgets.breaking, budgets.promotion,
                      list_length);
        throw ValidationError("budget_algorithmic", buf);
    }
    require(p_like >= 0.0 && p_like <= 1.0, "p_like", "must lie in [0, 1]");
    require(delta > 0.0, "drift_delta", "must be positive");
    require(epsilon > 0.0, "epsilon", "must be positive");
    require(hyper.threshold.std >= 0.0, "threshold_std", "must be non-negative");
    require(hyper.alpha.std >= 0.0, "alpha_std", "must be non-negative");
    require(hyper.user_concentration.std >= 0.0, "user_concentration_std", "must be non-negative");
    require(hyper.creator_concentration.std >= 0.0, "creator_concentration_std", "must be non-negative");
    train.validate();
    if (budgets.promotion > 0)
        require(promotion_mode != recsys::PromotionMode::None, "promotion_mode",
                "budget_promotion is positive but promotion_mode is none");
    require(promotion_interval > 0, "promotion_interval", "must be positive");
    if (promotion_mode == recsys::PromotionMode::Creator)
        require(promotion_count > 0 && promotion_count <= num_creators, "promotion_count",
                "must lie in [1, num_creators]");
    if (promotion_mode == recsys::PromotionMode::Topic)
        require(promotion_count > 0, "promotion_count", "must be positive");
    require(jaccard_pair_budget > 0, "jaccard_pair_budget", "must be positive");
    require(bootstrap.dimension > 0, "latent_dim", "must be positive");
    require(bootstrap.topics > 0, "bootstrap_topics", "must be positive");
    require(bootstrap.spread > 0.0, "bootstrap_spread", "must be positive");
    require(bootstrap.component_std > 0.0, "bootstrap_component_std", "must be positive");
    require(bootstrap.weight_skew >= 0.0, "bootstrap_weight_skew", "must be non-negative");
    require(propensity_exponent >= 0.0 && propensity_exponent <= 1.0, "propensity_exponent", "must lie in [0, 1]");
    require(propensity_floor > 0.0 && propensity_floor <= 1.0, "propensity_floor", "must lie in (0, 1]");
    require(em.max_iterations > 0, "em_max_iterations", "must be positive");
    require(em.tolerance >= 0.0, "em_tolerance", "must be non-negative");
    require(em.variance_floor > 0.0, "em_variance_floor", "must be positive");
    require(user_fit.learning_rate > 0.0, "user_fit_learning_rate", "must be positive");
    require(user_fit.batch_size > 0, "user_fit_batch_size", "must be positive");
    require(user_fit.negative_ratio > 0, "user_fit_negative_ratio", "must be positive");
    require(user_fit.l2 >= 0.0, "user_fit_l2", "must be non-negative");
}

std::vector<ConfigKeyInfo> config_keys() {
    const SimConfig defaults = build_config({});
    std::vector<ConfigKeyInfo> out;
    for (const auto& k : registry()) out.push_back({k.name, k.get(defaults), k.description});
    return out;
}

ConfigMap parse_config_text(std::istream& in) {
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    ConfigMap out;

    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("invalid JSON config: ") + e.what(), 0);
        }
        if (!doc.is_object()) throw ParseError("JSON config must be an object", 0);
        for (const auto& [key, value] : doc.items()) {
            if (value.is_string()) out[key] = value.get<std::string>();
            else if (value.is_number_integer() || value.is_number_unsigned() || value.is_number_float())
                out[key] = value.is_number_float() ? format_double(value.get<double>()) : value.dump();
            else throw ParseError("config value for '" + key + "' must be a string or a number", 0);
        }
        return out;
    }

    std::istringstream lines(text);
    std::string line;
    std::size_t number = 0;
    while (std::getline(lines, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", number);
        const std::string key = trim(std::string_view(stripped).substr(0, eq));
        const std::string value = trim(std::string_view(stripped).substr(eq + 1));
        if (key.empty()) throw ParseError("missing key", number);
        if (out.count(key)) throw ParseError("duplicate key '" + key + "'", number);
        out[key] = value;
    }
    return out;
}

SimConfig build_config(const ConfigMap& values) {
    SimConfig config;
    for (const auto& [name, value] : values)
        if (!find_key(name)) throw ValidationError(name, "unknown configuration key");

    if (auto it = values.find("strategy"); it != values.end()) apply_preset(config, parse_strategy(it->second));
    else apply_preset(config, Strategy::Default);

    for (const auto& [name, value] : values)
        if (name != "strategy") find_key(name)->set(config, value);

    if (!values.count("budget_algorithmic")) {
        const std::size_t others = config.budgets.cold_start + config.budgets.breaking + config.budgets.promotion;
        if (others > config.list_length)
            throw ValidationError("budget_algorithmic", "non-algorithmic budgets exceed list_length");
        config.budgets.algorithmic = config.list_length - others;
    }
    config.validate();
    return config;
}

SimConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file " + path.string());
    try {
        return build_config(parse_config_text(in));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), 0);
    }
}

ConfigMap config_to_map(const SimConfig& config) {
    ConfigMap out;
    for (const auto& k : registry()) out[k.name] = k.get(config);
    return out;
}

std::string render_config(const SimConfig& config) {
    std::string out;
    for (const auto& k : registry()) out += k.name + " = " + k.get(config) + "\n";
    return out;
}

std::string key_to_flag(const std::string& key) {
    std::string flag = key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    return flag;
}

}  // namespace nre::engine
