#include "nre/engine/snapshot.hpp"

#include <fstream>
#include <sstream>

#include "json_io.hpp"
#include "nre/core/math.hpp"

namespace nre::engine {

namespace {

using detail::Json;

constexpr const char* kFormat = "nresim-snapshot";

Json user_to_json(const agents::UserState& u) {
    Json by_creator = Json::array();
    for (const auto& [c, n] : u.likes_by_creator) by_creator.push_back({c, n});
    return Json{{"latent", detail::to_json(u.latent)},
                {"threshold", u.threshold},
                {"alpha", u.alpha},
                {"concentration", u.concentration},
                {"component", u.component},
                {"clicked", u.clicked},
                {"liked", u.liked},
                {"total_likes", u.total_likes},
                {"likes_by_creator", by_creator}};
}

agents::UserState user_from_json(const Json& j, UserId id) {
    agents::UserState u;
    u.id = id;
    u.latent = detail::latent_from_json(j.at("latent"));
    u.threshold = j.at("threshold").get<double>();
    u.alpha = j.at("alpha").get<double>();
    u.concentration = j.at("concentration").get<double>();
    u.component = j.at("component").get<std::size_t>();
    u.clicked = j.at("clicked").get<std::vector<NewsId>>();
    u.liked = j.at("liked").get<std::vector<NewsId>>();
    u.total_likes = j.at("total_likes").get<std::uint64_t>();
    for (const auto& pair : j.at("likes_by_creator"))
        u.likes_by_creator[pair.at(0).get<CreatorId>()] = pair.at(1).get<std::uint32_t>();
    return u;
}

Json creator_to_json(const agents::CreatorState& c) {
    return Json{{"latent", detail::to_json(c.latent)},
                {"concentration", c.concentration},
                {"component", c.component},
                {"owned", c.owned},
                {"last_round_likes", c.last_round_likes}};
}

agents::CreatorState creator_from_json(const Json& j, CreatorId id) {
    agents::CreatorState c;
    c.id = id;
    c.latent = detail::latent_from_json(j.at("latent"));
    c.concentration = j.at("concentration").get<double>();
    c.component = j.at("component").get<std::size_t>();
    c.owned = j.at("owned").get<std::vector<NewsId>>();
    c.last_round_likes = j.at("last_round_likes").get<std::uint64_t>();
    return c;
}

Json news_to_json(const agents::NewsItem& n) {
    return Json{{"creator", n.creator},
                {"latent", detail::to_json(n.latent)},
                {"quality", n.quality},
                {"created_round", n.created_round},
                {"active_rounds", n.active_rounds},
                {"likes_by_age", n.likes_by_age},
                {"total_likes", n.total_likes}};
}

agents::NewsItem news_from_json(const Json& j, NewsId id) {
    agents::NewsItem n;
    n.id = id;
    n.creator = j.at("creator").get<CreatorId>();
    n.latent = detail::latent_from_json(j.at("latent"));
    n.latent_norm = norm(n.latent);
    n.quality = j.at("quality").get<double>();
    n.created_round = j.at("created_round").get<Round>();
    n.active_rounds = j.at("active_rounds").get<Round>();
    n.likes_by_age = j.at("likes_by_age").get<std::vector<std::uint32_t>>();
    n.total_likes = j.at("total_likes").get<std::uint64_t>();
    return n;
}

Json matrix_to_json(const DenseMatrix& m) {
    return Json{{"rows", m.rows()}, {"cols", m.cols()},
                {"values", std::vector<double>(m.flat().begin(), m.flat().end())}};
}

void matrix_from_json(const Json& j, DenseMatrix& m) {
    const auto values = j.at("values").get<std::vector<double>>();
    if (j.at("rows").get<std::size_t>() != m.rows() || j.at("cols").get<std::size_t>() != m.cols() ||
        values.size() != m.flat().size())
        throw FormatError("snapshot embedding matrix has the wrong shape");
    std::copy(values.begin(), values.end(), m.flat().begin());
}

Json model_to_json(const recsys::RankingModel& m) {
    return Json{{"dimension", m.dimension()},
                {"users", m.users()},
                {"news", m.news()},
                {"covered_users", m.covered_users()},
                {"covered_news", m.covered_news()},
                {"user_embeddings", matrix_to_json(m.user_embeddings())},
                {"news_embeddings", matrix_to_json(m.news_embeddings())}};
}

recsys::RankingModel model_from_json(const Json& j) {
    recsys::RankingModel m(j.at("users").get<std::vector<UserId>>(), j.at("news").get<std::vector<NewsId>>(),
                           j.at("dimension").get<std::size_t>());
    m.set_coverage(j.at("covered_users").get<std::vector<UserId>>(), j.at("covered_news").get<std::vector<NewsId>>());
    matrix_from_json(j.at("user_embeddings"), m.user_embeddings());
    matrix_from_json(j.at("news_embeddings"), m.news_embeddings());
    return m;
}

Json state_to_json(const SimState& s) {
    Json users = Json::array();
    for (const auto& u : s.users) users.push_back(user_to_json(u));
    Json creators = Json::array();
    for (const auto& c : s.creators) creators.push_back(creator_to_json(c));
    Json news = Json::array();
    for (const auto& n : s.news) news.push_back(news_to_json(n));
    std::vector<std::uint32_t> likes;
    likes.reserve(s.recent_likes.size() * 3);
    for (const auto& e : s.recent_likes) {
        likes.push_back(e.user);
        likes.push_back(e.news);
        likes.push_back(e.round);
    }
    Json means = Json::array();
    for (const auto& m : s.topic_means) means.push_back(detail::to_json(m));
    Json reports = Json::array();
    for (const auto& r : s.reports) reports.push_back(metrics::report_csv_row(r, 17));

    return Json{{"seed", s.seed},
                {"round", s.round},
                {"users", users},
                {"creators", creators},
                {"news", news},
                {"active_news", s.active_news},
                {"recent_likes", likes},
                {"last_algorithmic", s.last_algorithmic},
                {"topic_means", means},
                {"promoted_creators", s.promoted_creators},
                {"promoted_topics", s.promoted_topics},
                {"promotion_drawn", s.promotion_drawn},
                {"model", s.model ? model_to_json(*s.model) : Json(nullptr)},
                {"report_columns", metrics::report_csv_header()},
                {"reports", reports}};
}

SimState state_from_json(const Json& j) {
    SimState s;
    s.seed = j.at("seed").get<std::uint64_t>();
    s.round = j.at("round").get<Round>();
    const auto& users = j.at("users");
    for (std::size_t i = 0; i < users.size(); ++i) s.users.push_back(user_from_json(users[i], static_cast<UserId>(i)));
    const auto& creators = j.at("creators");
    for (std::size_t i = 0; i < creators.size(); ++i)
        s.creators.push_back(creator_from_json(creators[i], static_cast<CreatorId>(i)));
    const auto& news = j.at("news");
    s.news.reserve(news.size());
    for (std::size_t i = 0; i < news.size(); ++i) s.news.push_back(news_from_json(news[i], static_cast<NewsId>(i)));
    s.active_news = j.at("active_news").get<std::vector<NewsId>>();
    const auto likes = j.at("recent_likes").get<std::vector<std::uint32_t>>();
    if (likes.size() % 3 != 0) throw FormatError("snapshot LIKE history is malformed");
    for (std::size_t i = 0; i < likes.size(); i += 3) s.recent_likes.push_back({likes[i], likes[i + 1], likes[i + 2]});
    s.last_algorithmic = j.at("last_algorithmic").get<std::vector<NewsId>>();
    for (const auto& m : j.at("topic_means")) s.topic_means.push_back(detail::latent_from_json(m));
    s.promoted_creators = j.at("promoted_creators").get<std::vector<CreatorId>>();
    s.promoted_topics = j.at("promoted_topics").get<std::vector<std::size_t>>();
    s.promotion_drawn = j.at("promotion_drawn").get<Round>();
    if (!j.at("model").is_null()) s.model = model_from_json(j.at("model"));
    if (j.at("report_columns").get<std::string>() != metrics::report_csv_header())
        throw FormatError("snapshot report columns differ from this build");
    for (const auto& row : j.at("reports")) s.reports.push_back(metrics::parse_report_row(row.get<std::string>()));
    check_state(s);
    return s;
}

Json document(const SimState& state, const SimConfig& config) {
    Json cfg = Json::object();
    for (const auto& [k, v] : config_to_map(config)) cfg[k] = v;
    return Json{{"format", kFormat}, {"version", kSnapshotVersion}, {"config", cfg}, {"state", state_to_json(state)}};
}

void write_text_atomically(const std::filesystem::path& path, const std::string& text) {
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << text;
        if (!out) throw Error("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

std::string snapshot_text(const SimState& state, const SimConfig& config) {
    return document(state, config).dump() + "\n";
}

Snapshot parse_snapshot(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::exception& e) {
        throw FormatError(std::string("snapshot is not valid JSON: ") + e.what());
    }
    detail::expect_header(doc, kFormat, kSnapshotVersion);
    if (doc.contains("diagnostic")) throw FormatError("diagnostic snapshots cannot be restored");
    try {
        ConfigMap values;
        for (const auto& [k, v] : doc.at("config").items()) values[k] = v.get<std::string>();
        Snapshot snap{state_from_json(doc.at("state")), build_config(values)};
        if (snap.state.seed != snap.config.seed) throw FormatError("snapshot seed disagrees with its config");
        return snap;
    } catch (const Json::exception& e) {
        throw FormatError(std::string("snapshot is malformed: ") + e.what());
    }
}

void save_snapshot(const std::filesystem::path& path, const SimState& state, const SimConfig& config) {
    write_text_atomically(path, snapshot_text(state, config));
}

Snapshot load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_snapshot(buffer.str());
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void save_diagnostic_snapshot(const std::filesystem::path& path, const SimState& state, const SimConfig& config,
                              const std::string& error) {
    Json doc = document(state, config);
    doc["diagnostic"] = error;
    write_text_atomically(path, doc.dump() + "\n");
}

}  // namespace nre::engine
