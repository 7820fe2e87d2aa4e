#include "nre/engine/simulation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "nre/agents/creator.hpp"
#include "nre/agents/user.hpp"
#include "nre/core/math.hpp"
#include "nre/core/sampling.hpp"
#include "nre/datagen/bootstrap.hpp"
#include "nre/engine/export.hpp"
#include "nre/engine/snapshot.hpp"
#include "nre/error.hpp"
#include "nre/log.hpp"
#include "nre/metrics/metrics.hpp"

namespace nre::engine {

namespace {

using recsys::Channel;
using recsys::ChannelCandidates;
using recsys::RecommendationSlate;

agents::ProductionParams production(const SimConfig& c, Round r) {
    return {c.delta, r, static_cast<Round>(c.active_rounds)};
}

struct Tally {
    std::vector<double> user_likes;
    std::vector<double> like_cosines;
    std::uint64_t clicks = 0;
    std::uint64_t likes = 0;
    std::array<std::uint64_t, recsys::kChannelCount> by_channel{};
};

void append_news(SimState& s, std::vector<agents::NewsItem> items, std::vector<NewsId>* fresh) {
    for (auto& item : items) {
        s.creators[item.creator].owned.push_back(item.id);
        s.active_news.push_back(item.id);
        if (fresh) fresh->push_back(item.id);
        s.news.push_back(std::move(item));
    }
}

std::string round_name(Round r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "round_%03u", r);
    return buf;
}

/// Users read their slates; LIKE counters of users, news and creators follow.
Tally respond(SimState& s, const SimConfig& c, Round r, const std::vector<RecommendationSlate>& slates,
              RoundTrace* trace) {
    Tally t;
    t.user_likes.assign(s.users.size(), 0.0);
    const double qmax = agents::max_quality(c.news_per_creator, s.users.size());
    const RngStream root = RngStream(s.seed, "users").derive(r);
    if (trace) trace->users.resize(s.users.size());

    std::vector<agents::DriftTerm> terms;
    std::vector<NewsId> clicked;
    std::vector<NewsId> liked;
    for (std::size_t u = 0; u < s.users.size(); ++u) {
        auto& user = s.users[u];
        const auto& slate = slates[u];
        RngStream rng = root.derive(u);
        const auto positions = agents::user_click(user, slate.items, s.news, c.n_click, rng);

        terms.clear();
        clicked.clear();
        liked.clear();
        for (std::size_t p : positions) {
            const NewsId n = slate.items[p];
            const auto& item = s.news[n];
            const auto decision = agents::user_like(user, item, qmax);
            terms.push_back({&item.latent, decision.liked, decision.utility});
            clicked.push_back(n);
            if (decision.liked) {
                liked.push_back(n);
                t.like_cosines.push_back(decision.cosine);
                ++t.by_channel[static_cast<std::size_t>(slate.tags[p])];
            }
        }

        LatentVector next = agents::user_drift(user.latent, user.concentration, terms, c.delta, c.epsilon);
        if (trace) trace->users[u].displacement = norm(next - user.latent);
        user.latent = std::move(next);

        for (NewsId n : clicked) agents::insert_sorted(user.clicked, n);
        for (NewsId n : liked) {
            auto& item = s.news[n];
            agents::insert_sorted(user.liked, n);
            ++user.total_likes;
            ++user.likes_by_creator[item.creator];
            ++item.likes_by_age[r - item.created_round];
            ++item.total_likes;
            s.recent_likes.push_back({static_cast<UserId>(u), n, r});
        }
        t.clicks += clicked.size();
        t.likes += liked.size();
        t.user_likes[u] = static_cast<double>(liked.size());
        if (trace) {
            trace->users[u].slate = slate;
            trace->users[u].clicked = clicked;
            trace->users[u].liked = liked;
        }
    }

    for (auto& creator : s.creators) creator.last_round_likes = 0;
    for (NewsId n : s.active_news) s.creators[s.news[n].creator].last_round_likes += s.news[n].likes_in(r);

    const Round keep = static_cast<Round>(std::max(c.active_rounds, c.effective_jaccard_window()));
    std::erase_if(s.recent_likes, [&](const recsys::LikeEvent& e) { return e.round + keep <= r; });

    if (trace) {
        trace->round = r;
        trace->news_likes.assign(s.news.size(), 0);
        for (NewsId n : s.active_news) trace->news_likes[n] = s.news[n].likes_in(r);
        trace->creator_likes.clear();
        for (const auto& creator : s.creators) trace->creator_likes.push_back(creator.last_round_likes);
    }
    return t;
}

std::optional<double> gini_or_missing(const std::vector<double>& values) {
    if (values.empty()) return std::nullopt;
    return metrics::gini(values);
}

metrics::RoundReport make_report(const SimState& s, const SimConfig& c, Round r, const Tally& t,
                                 std::optional<double> validation_mrr) {
    metrics::RoundReport rep;
    rep.round = r;
    rep.active_news = s.active_news.size();
    rep.total_clicks = t.clicks;
    rep.total_likes = t.likes;
    rep.avg_likes_per_user = static_cast<double>(t.likes) / static_cast<double>(s.users.size());
    rep.gini_users = gini_or_missing(t.user_likes);

    std::vector<double> news_likes;
    std::vector<double> qualities;
    news_likes.reserve(s.active_news.size());
    qualities.reserve(s.active_news.size());
    for (NewsId n : s.active_news) {
        news_likes.push_back(s.news[n].likes_in(r));
        qualities.push_back(s.news[n].quality);
    }
    rep.gini_news = gini_or_missing(news_likes);

    std::vector<double> creator_likes;
    creator_likes.reserve(s.creators.size());
    for (const auto& creator : s.creators) creator_likes.push_back(static_cast<double>(creator.last_round_likes));
    rep.gini_creators = gini_or_missing(creator_likes);

    const auto cov = metrics::coverage(s.model ? &*s.model : nullptr, s.users.size(), s.active_news);
    rep.covered_users = cov.users;
    rep.covered_news = cov.news;

    if (!qualities.empty()) {
        const auto q = metrics::quality_stats(qualities, news_likes);
        rep.avg_quality = q.average;
        rep.weighted_quality = q.like_weighted;
        rep.pearson_quality_likes = metrics::pearson(qualities, news_likes);
    }

    const Round window = static_cast<Round>(c.effective_jaccard_window());
    std::vector<std::vector<NewsId>> sets(s.users.size());
    for (const auto& e : s.recent_likes)
        if (e.round + window > r) sets[e.user].push_back(e.news);
    for (auto& set : sets) {
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
    }
    RngStream rng = RngStream(s.seed, "metrics").derive(r);
    rep.jaccard = metrics::jaccard_homogenization(sets, c.jaccard_pair_budget, rng);

    rep.user_news_cosine = metrics::user_news_similarity(t.like_cosines);
    for (const auto& user : s.users) rep.in_loop_users += user.total_likes > 0 ? 1 : 0;
    rep.validation_mrr5 = validation_mrr;
    rep.likes_by_channel = t.by_channel;
    return rep;
}

void draw_promotions(SimState& s, const SimConfig& c, Round r) {
    RngStream rng = RngStream(s.seed, "promotion").derive(r);
    s.promotion_drawn = r;
    if (c.promotion_mode == recsys::PromotionMode::Creator) {
        s.promoted_creators.clear();
        for (std::size_t i : sample_without_replacement(s.creators.size(), c.promotion_count, rng))
            s.promoted_creators.push_back(static_cast<CreatorId>(i));
        std::sort(s.promoted_creators.begin(), s.promoted_creators.end());
    } else if (c.promotion_mode == recsys::PromotionMode::Topic) {
        if (c.promotion_count > s.topic_means.size())
            throw ValidationError("promotion_count", "exceeds the " + std::to_string(s.topic_means.size()) +
                                                         " available topics");
        s.promoted_topics = sample_without_replacement(s.topic_means.size(), c.promotion_count, rng);
        std::sort(s.promoted_topics.begin(), s.promoted_topics.end());
    }
}

std::vector<RecommendationSlate> random_slates(const SimState& s, const SimConfig& c, Round r) {
    const RngStream root = RngStream(s.seed, "slate").derive(r);
    std::vector<RecommendationSlate> slates(s.users.size());
    for (std::size_t u = 0; u < s.users.size(); ++u) {
        RngStream rng = root.derive(u);
        const auto& user = s.users[u];
        ChannelCandidates all{Channel::Algorithmic,
                              recsys::recommend_algorithmic(nullptr, user, s.active_news, c.list_length, rng),
                              c.list_length};
        slates[u] = recsys::merge_slate(std::span(&all, 1), c.list_length, {}, {}, rng);
    }
    return slates;
}

std::vector<RecommendationSlate> build_slates(const SimState& s, const SimConfig& c, Round r,
                                              const std::vector<NewsId>& fresh) {
    if (!s.model) return random_slates(s, c, r);

    const auto& b = c.budgets;
    // A user has clicked at most n_click * S active news and earlier channels
    // fill at most list_length slots, so longer shared lists are never reached.
    const std::size_t reach = c.list_length + c.n_click * c.active_rounds;
    const auto clip = [reach](std::vector<NewsId>& v) {
        if (v.size() > reach) v.resize(reach);
    };
    std::vector<NewsId> breaking;
    if (b.breaking > 0)
        breaking = recsys::recommend_breaking(s.active_news, s.news, s.last_algorithmic, r - 1, reach);

    std::vector<LatentVector> promoted_means;
    std::vector<NewsId> topic_ranked;
    std::vector<NewsId> promoted_news;
    if (b.promotion > 0 && c.promotion_mode == recsys::PromotionMode::Topic) {
        for (std::size_t t : s.promoted_topics) promoted_means.push_back(s.topic_means[t]);
        topic_ranked =
            recsys::recommend_promotion_topics(promoted_means, s.active_news, s.news, reach);
    }
    if (b.promotion > 0 && c.promotion_mode == recsys::PromotionMode::Creator) {
        for (NewsId n : s.active_news)
            if (std::binary_search(s.promoted_creators.begin(), s.promoted_creators.end(), s.news[n].creator))
                promoted_news.push_back(n);
    }

    clip(breaking);
    clip(topic_ranked);
    const Channel cold_channel =
        c.cold_start_mode == recsys::ColdStartMode::Affinity ? Channel::ColdAffinity : Channel::ColdRandom;
    const std::size_t cold_request = b.cold_start + b.breaking + b.promotion;
    const RngStream root = RngStream(s.seed, "slate").derive(r);
    const recsys::RankingModel* model = &*s.model;

    std::vector<RecommendationSlate> slates(s.users.size());
    std::vector<ChannelCandidates> channels;
    for (std::size_t u = 0; u < s.users.size(); ++u) {
        RngStream rng = root.derive(u);
        const auto& user = s.users[u];
        channels.clear();
        if (b.breaking > 0) channels.push_back({Channel::Breaking, breaking, b.breaking});
        if (b.promotion > 0) {
            if (c.promotion_mode == recsys::PromotionMode::Creator)
                channels.push_back({Channel::Promotion,
                                    recsys::recommend_promotion_creators(s.promoted_creators, promoted_news, s.news,
                                                                         promoted_news.size(), rng),
                                    b.promotion});
            else
                channels.push_back({Channel::Promotion, topic_ranked, b.promotion});
        }
        if (b.cold_start > 0)
            channels.push_back({cold_channel,
                                recsys::recommend_cold_start(c.cold_start_mode, user, fresh, s.news, cold_request, rng),
                                b.cold_start});
        channels.push_back({Channel::Algorithmic,
                            recsys::recommend_algorithmic(model, user, s.active_news, c.list_length, rng),
                            b.algorithmic});
        slates[u] = recsys::merge_slate(channels, c.list_length, s.active_news,
                                        [&user](NewsId n) { return user.has_clicked(n); }, rng);
    }
    return slates;
}

std::vector<NewsId> algorithmic_placements(const std::vector<RecommendationSlate>& slates) {
    std::vector<NewsId> out;
    for (const auto& slate : slates)
        for (std::size_t i = 0; i < slate.size(); ++i)
            if (slate.tags[i] == Channel::Algorithmic) out.push_back(slate.items[i]);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Streams every per-round artefact below the output directory.
class Exporter {
public:
    Exporter(const RunOptions& options, const SimConfig& config) : options_(options), config_(config) {
        if (!options.out_dir) return;
        dir_ = *options.out_dir;
        std::filesystem::create_directories(dir_);
        std::ofstream(dir_ / "config.txt", std::ios::binary) << render_config(config);
        metrics_.open(dir_ / "metrics.csv", std::ios::binary | std::ios::trunc);
        if (!metrics_) throw Error("cannot write " + (dir_ / "metrics.csv").string());
        metrics_ << metrics::report_csv_header() << '\n' << std::flush;
        if (options.wordbase) {
            explanations_.open(dir_ / "explanations.csv", std::ios::binary | std::ios::trunc);
            explanations_ << explanation_csv_header() << '\n' << std::flush;
        }
    }

    bool enabled() const noexcept { return !dir_.empty(); }
    const std::filesystem::path& dir() const noexcept { return dir_; }

    void replay(const std::vector<metrics::RoundReport>& reports) {
        if (!enabled()) return;
        for (const auto& rep : reports) metrics_ << metrics::report_csv_row(rep) << '\n';
        metrics_ << std::flush;
    }

    void after_round(const SimState& s, bool last) {
        if (!enabled()) return;
        if (s.round > 0) {
            metrics_ << metrics::report_csv_row(s.reports.back()) + "\n" << std::flush;
            if (!metrics_) throw Error("failed writing metrics.csv");
        }
        const bool sampled = config_.projection_every > 0 && (s.round % config_.projection_every == 0 || last);
        if (sampled) {
            std::filesystem::create_directories(dir_ / "projections");
            export_latent_projection(s, dir_ / "projections" / (round_name(s.round) + ".csv"));
            if (options_.wordbase) {
                const auto ids = sample_explained_users(s.users.size(), config_.explain_users);
                write_explanation_rows(explanations_, explain_users(s, *options_.wordbase, ids, config_.explain_top_k));
                explanations_ << std::flush;
            }
        }
        const bool snap = last || (config_.snapshot_every > 0 && s.round > 0 && s.round % config_.snapshot_every == 0);
        if (snap) {
            std::filesystem::create_directories(dir_ / "snapshots");
            save_snapshot(dir_ / "snapshots" / (round_name(s.round) + ".json"), s, config_);
        }
    }

private:
    const RunOptions& options_;
    const SimConfig& config_;
    std::filesystem::path dir_;
    std::ofstream metrics_;
    std::ofstream explanations_;
};

SimulationResult drive(SimState state, const SimConfig& config, const RunOptions& options, Exporter& exporter) {
    RoundTrace trace;
    RoundTrace* tp = options.on_trace ? &trace : nullptr;
    while (state.round < config.rounds) {
        try {
            run_round(state, config, tp);
        } catch (const std::exception& e) {
            if (exporter.enabled()) {
                const auto path = exporter.dir() / ("diagnostic_" + round_name(state.round + 1) + ".json");
                try {
                    save_diagnostic_snapshot(path, state, config, e.what());
                } catch (const std::exception&) {
                    log_warning("could not write diagnostic snapshot " + path.string());
                }
            }
            throw;
        }
        if (tp) options.on_trace(state, trace);
        exporter.after_round(state, state.round == config.rounds);
        if (options.on_round) options.on_round(state.reports.back());
    }
    SimulationResult result;
    result.reports = state.reports;
    result.state = std::move(state);
    return result;
}

}  // namespace

GeneratedPopulation generate_bootstrap_population(const SimConfig& config) {
    RngStream rng(config.seed, "bootstrap");
    auto space = datagen::bootstrap_latent_space(config.bootstrap, rng);
    RngStream pop_rng(config.seed, "population");
    GeneratedPopulation out;
    out.population = datagen::sample_population(space.users, space.creators, config.num_users, config.num_creators,
                                                 config.hyper, pop_rng);
    out.word_table = std::move(space.word_table);
    out.wordbase_tokens = std::move(space.wordbase_tokens);
    return out;
}

SimState initialize_simulation(const datagen::SyntheticPopulation& population, const SimConfig& config,
                               RoundTrace* trace) {
    if (population.users.size() != config.num_users)
        throw ValidationError("num_users", "population holds " + std::to_string(population.users.size()) +
                                               " users but the configuration asks for " +
                                               std::to_string(config.num_users));
    if (population.creators.size() != config.num_creators)
        throw ValidationError("num_creators", "population holds " + std::to_string(population.creators.size()) +
                                                  " creators but the configuration asks for " +
                                                  std::to_string(config.num_creators));

    SimState s;
    s.seed = config.seed;
    s.round = 0;
    s.topic_means = population.creator_model.means;
    s.users.reserve(population.users.size());
    for (std::size_t u = 0; u < population.users.size(); ++u) {
        const auto& src = population.users[u];
        agents::UserState user;
        user.id = static_cast<UserId>(u);
        user.latent = src.latent;
        user.threshold = src.threshold;
        user.alpha = src.alpha;
        user.concentration = src.concentration;
        user.component = src.component;
        s.users.push_back(std::move(user));
    }
    s.creators.reserve(population.creators.size());
    for (std::size_t i = 0; i < population.creators.size(); ++i) {
        const auto& src = population.creators[i];
        agents::CreatorState creator;
        creator.id = static_cast<CreatorId>(i);
        creator.latent = src.latent;
        creator.concentration = src.concentration;
        creator.component = src.component;
        s.creators.push_back(std::move(creator));
    }

    const RngStream root(config.seed, "initial-news");
    s.news.reserve(config.num_creators * config.news_per_creator * (config.active_rounds + 1));
    for (auto& creator : s.creators) {
        RngStream rng = root.derive(creator.id);
        creator.last_round_likes = sample_binomial(config.n_click, config.p_like, rng);
        const auto first = static_cast<NewsId>(s.news.size());
        append_news(s, agents::creator_initial_news(creator, config.news_per_creator, production(config, 0), first, rng),
                    nullptr);
    }
    if (s.active_news.size() < config.list_length)
        log_warning("only " + std::to_string(s.active_news.size()) + " news exist; initial lists are truncated");

    const auto slates = random_slates(s, config, 0);
    respond(s, config, 0, slates, trace);
    if (trace) trace->fresh_news = s.active_news;
    return s;
}

const metrics::RoundReport& run_round(SimState& s, const SimConfig& c, RoundTrace* trace) {
    const Round r = s.round + 1;

    std::erase_if(s.active_news, [&](NewsId n) { return !s.news[n].active_in(r); });

    std::vector<NewsId> fresh;
    const RngStream creator_root = RngStream(s.seed, "creators").derive(r);
    for (auto& creator : s.creators) {
        RngStream rng = creator_root.derive(creator.id);
        const auto anchors = agents::creator_select_topics(creator, s.news, r - 1, c.news_per_creator, c.epsilon, rng);
        const auto first = static_cast<NewsId>(s.news.size());
        append_news(s, agents::creator_produce_news(creator, anchors, s.news, production(c, r), first, rng), &fresh);
    }

    if (c.budgets.promotion > 0 && (r - 1) % c.promotion_interval == 0) draw_promotions(s, c, r);

    std::vector<recsys::LikeEvent> likes;
    for (const auto& e : s.recent_likes)
        if (s.news[e.news].active_in(r)) likes.push_back(e);
    std::vector<std::vector<NewsId>> liked_by_user;
    liked_by_user.reserve(s.users.size());
    for (const auto& user : s.users) liked_by_user.push_back(user.liked);

    RngStream train_rng = RngStream(s.seed, "recsys").derive(r);
    const recsys::TrainingSetOptions set_options{c.train.negative_ratio, c.train.split, c.train.mrr_candidates};
    const auto data = recsys::build_training_set(likes, s.active_news, liked_by_user, set_options, train_rng);
    std::optional<double> validation_mrr;
    s.model.reset();
    if (!data.cold()) {
        auto result = recsys::train_ranking_model(data, c.train, train_rng);
        validation_mrr = result.validation_mrr[result.best_epoch];
        s.model = std::move(result.model);
    }

    const auto slates = build_slates(s, c, r, fresh);
    s.last_algorithmic = algorithmic_placements(slates);

    const Tally tally = respond(s, c, r, slates, trace);
    if (trace) trace->fresh_news = fresh;
    s.round = r;
    s.reports.push_back(make_report(s, c, r, tally, validation_mrr));
    return s.reports.back();
}

void check_state(const SimState& s) {
    const auto fail = [](const std::string& what) { throw Error("inconsistent state: " + what); };
    for (std::size_t i = 0; i < s.news.size(); ++i) {
        const auto& item = s.news[i];
        if (item.id != i) fail("news id " + std::to_string(item.id) + " stored at " + std::to_string(i));
        if (item.creator >= s.creators.size()) fail("news " + std::to_string(i) + " has unknown creator");
        if (item.created_round > s.round) fail("news " + std::to_string(i) + " created in the future");
        if (item.likes_by_age.size() != item.active_rounds) fail("news " + std::to_string(i) + " like window");
    }
    std::vector<NewsId> expected;
    for (const auto& item : s.news)
        if (item.active_in(s.round)) expected.push_back(item.id);
    if (expected != s.active_news) fail("active news disagree with activity windows");
    for (const auto& creator : s.creators)
        for (NewsId n : creator.owned)
            if (n >= s.news.size() || s.news[n].creator != creator.id) fail("creator ownership");
    for (const auto& user : s.users) {
        if (!std::is_sorted(user.clicked.begin(), user.clicked.end())) fail("clicked not sorted");
        for (NewsId n : user.clicked)
            if (n >= s.news.size()) fail("click on unknown news");
        for (NewsId n : user.liked)
            if (!user.has_clicked(n)) fail("LIKE without click");
    }
    for (const auto& e : s.recent_likes)
        if (e.user >= s.users.size() || e.news >= s.news.size() || e.round > s.round) fail("LIKE event ids");
}

SimulationResult run_simulation(const SimConfig& config, const RunOptions& options) {
    config.validate();
    GeneratedPopulation generated;
    const datagen::SyntheticPopulation* population = options.population;
    if (!population) {
        generated = generate_bootstrap_population(config);
        population = &generated.population;
    }
    std::optional<embeddings::Wordbase> wordbase;
    RunOptions effective = options;
    if (!effective.wordbase && generated.word_table && !generated.wordbase_tokens.empty()) {
        wordbase.emplace(*generated.word_table, generated.wordbase_tokens);
        effective.wordbase = &*wordbase;
    }

    Exporter exporter(effective, config);
    RoundTrace trace;
    SimState state = initialize_simulation(*population, config, effective.on_trace ? &trace : nullptr);
    if (effective.on_trace) effective.on_trace(state, trace);
    exporter.after_round(state, false);
    return drive(std::move(state), config, effective, exporter);
}

SimulationResult resume_simulation(SimState state, const SimConfig& config, const RunOptions& options) {
    config.validate();
    if (state.seed != config.seed) throw ValidationError("seed", "snapshot was taken under a different seed");
    if (state.round > config.rounds) throw ValidationError("rounds", "snapshot is past the configured round count");
    Exporter exporter(options, config);
    exporter.replay(state.reports);
    return drive(std::move(state), config, options, exporter);
}

}  // namespace nre::engine
