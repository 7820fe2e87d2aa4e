#include "nre/datagen/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "nre/datagen/propensity.hpp"
#include "nre/error.hpp"

namespace nre::datagen {

namespace {

std::uint32_t parse_id(const std::string& field, std::size_t line, const char* what) {
    if (field.empty() || field.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError(std::string("invalid ") + what + " '" + field + "'", line);
    const unsigned long long v = std::stoull(field);
    if (v > 0xffffffffULL) throw ParseError(std::string(what) + " out of range", line);
    return static_cast<std::uint32_t>(v);
}

}  // namespace

std::vector<NewsRecord> read_news_catalog(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty news catalog", 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "news_id,creator_id,category,text")
        throw ParseError("expected header 'news_id,creator_id,category,text'", 1);

    std::vector<NewsRecord> out;
    std::size_t number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto a = line.find(',');
        const auto b = a == std::string::npos ? a : line.find(',', a + 1);
        const auto c = b == std::string::npos ? b : line.find(',', b + 1);
        if (c == std::string::npos) throw ParseError("expected four fields", number);
        NewsRecord rec;
        rec.id = parse_id(line.substr(0, a), number, "news id");
        rec.creator = parse_id(line.substr(a + 1, b - a - 1), number, "creator id");
        rec.category = line.substr(b + 1, c - b - 1);
        rec.text = line.substr(c + 1);
        out.push_back(std::move(rec));
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
    for (std::size_t i = 0; i < out.size(); ++i)
        if (out[i].id != i) throw FormatError("news ids must be exactly 0.." + std::to_string(out.size() - 1));
    if (out.empty()) throw FormatError("news catalog has no rows");
    return out;
}

std::vector<NewsRecord> load_news_catalog(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    try {
        return read_news_catalog(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), 0);
    }
}

DatasetPipelineResult generate_from_dataset(const embeddings::EmbeddingTable& table,
                                            const std::vector<NewsRecord>& catalog, const InteractionLog& log,
                                            const DatasetPipelineConfig& config, RngStream& rng) {
    DatasetPipelineResult result;
    if (log.news_count > catalog.size())
        throw FormatError("interaction log references news id " + std::to_string(log.news_count - 1) +
                          " missing from the catalog");

    std::vector<LatentVector> news_latents;
    news_latents.reserve(catalog.size());
    for (const auto& rec : catalog) {
        const auto tokens = embeddings::split_tokens(rec.text);
        try {
            auto encoded = embeddings::encode_news(tokens, table);
            result.out_of_vocabulary_tokens += encoded.out_of_vocabulary;
            news_latents.push_back(std::move(encoded.latent));
        } catch (const DegenerateInputError&) {
            throw FormatError("news " + std::to_string(rec.id) + " has no token in the embedding vocabulary");
        }
    }

    const auto propensity = estimate_propensity(log, config.propensity_exponent, config.propensity_floor);
    RngStream fit_rng = rng.derive("user-latents");
    const auto fit = fit_unbiased_bpr(log, news_latents, propensity, config.user_fit, fit_rng);
    result.excluded_users = fit.excluded_users;
    std::vector<LatentVector> user_latents;
    for (UserId u : fit.retained_users) {
        const auto row = fit.users.row(u);
        user_latents.emplace_back(std::vector<double>(row.begin(), row.end()));
    }
    if (user_latents.empty()) throw DegenerateInputError("no user has a positive interaction");

    std::map<CreatorId, std::vector<LatentVector>> by_creator;
    for (const auto& rec : catalog) by_creator[rec.creator].push_back(news_latents[rec.id]);
    std::vector<std::vector<LatentVector>> grouped;
    for (auto& [id, latents] : by_creator) grouped.push_back(std::move(latents));
    const auto creator_latents = creator_latents_from_news(grouped);

    std::set<std::string> categories;
    for (const auto& rec : catalog)
        if (!rec.category.empty()) categories.insert(rec.category);
    std::size_t components = categories.empty() ? config.components : categories.size();
    const std::size_t cap = std::min(user_latents.size(), creator_latents.size());
    if (components > cap) {
        result.notes.push_back("mixture components reduced from " + std::to_string(components) + " to " +
                               std::to_string(cap) + " (too few samples)");
        components = cap;
    }

    RngStream user_em = rng.derive("user-mixture");
    result.user_mixture = fit_gmm(user_latents, components, config.em, user_em);
    RngStream creator_em = rng.derive("creator-mixture");
    result.creator_mixture = fit_gmm(creator_latents, components, config.em, creator_em);
    for (const auto& n : result.user_mixture.notes) result.notes.push_back("users: " + n);
    for (const auto& n : result.creator_mixture.notes) result.notes.push_back("creators: " + n);

    RngStream pop_rng = rng.derive("population");
    result.population = sample_population(result.user_mixture.model, result.creator_mixture.model, config.user_count,
                                          config.creator_count, config.hyper, pop_rng);
    return result;
}

}  // namespace nre::datagen
