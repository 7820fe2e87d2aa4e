#include "nre/engine/export.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "nre/core/pca.hpp"
#include "nre/error.hpp"

namespace nre::engine {

std::vector<ProjectionRow> latent_projection(const SimState& state) {
    std::vector<LatentVector> points;
    points.reserve(state.users.size() + state.active_news.size());
    for (const auto& u : state.users) points.push_back(u.latent);
    for (NewsId n : state.active_news) points.push_back(state.news[n].latent);

    const auto pca = pca_project(points, 2);
    std::vector<ProjectionRow> rows;
    rows.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        ProjectionRow row;
        if (i < state.users.size()) {
            const auto& u = state.users[i];
            row.id = u.id;
            row.in_loop = u.total_likes > 0;
            row.likes = u.total_likes;
        } else {
            const auto& item = state.news[state.active_news[i - state.users.size()]];
            row.id = item.id;
            row.is_user = false;
            row.likes = item.total_likes;
        }
        row.x = pca.coordinates[i][0];
        row.y = pca.coordinates[i][1];
        rows.push_back(row);
    }
    return rows;
}

void write_projection_csv(std::ostream& out, Round round, std::span<const ProjectionRow> rows) {
    out << "round,id,kind,in_loop,likes,x,y\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%u,%u,%s,%d,%llu,%.9g,%.9g\n", round, r.id, r.is_user ? "user" : "news",
                      r.in_loop ? 1 : 0, static_cast<unsigned long long>(r.likes), r.x, r.y);
        out << buf;
    }
}

void export_latent_projection(const SimState& state, const std::filesystem::path& path) {
    const auto rows = latent_projection(state);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    write_projection_csv(out, state.round, rows);
    if (!out) throw Error("failed writing " + path.string());
}

std::vector<ExplanationRow> explain_users(const SimState& state, const embeddings::Wordbase& wordbase,
                                          std::span<const UserId> users, std::size_t k) {
    std::vector<ExplanationRow> rows;
    for (UserId id : users) {
        if (id >= state.users.size()) throw Error("cannot explain unknown user " + std::to_string(id));
        const auto& u = state.users[id];
        const auto matches = embeddings::nearest_words(u.latent, k, wordbase);
        for (std::size_t i = 0; i < matches.size(); ++i)
            rows.push_back({state.round, id, u.total_likes > 0, i + 1, matches[i].token, matches[i].cosine});
    }
    return rows;
}

std::string explanation_csv_header() { return "round,user_id,in_loop,rank,token,cosine"; }

void write_explanation_rows(std::ostream& out, std::span<const ExplanationRow> rows) {
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.9g", r.cosine);
        out << r.round << ',' << r.user << ',' << (r.in_loop ? 1 : 0) << ',' << r.rank << ',' << r.token << ','
            << buf << '\n';
    }
}

std::vector<UserId> sample_explained_users(std::size_t user_count, std::size_t count) {
    std::vector<UserId> out;
    if (user_count == 0) return out;
    count = std::min(count, user_count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(static_cast<UserId>(i * user_count / count));
    return out;
}

}  // namespace nre::engine
