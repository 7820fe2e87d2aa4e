#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nre/embeddings/embedding_table.hpp"
#include "nre/engine/state.hpp"

namespace nre::engine {

struct ProjectionRow {
    std::uint32_t id = 0;
    bool is_user = true;
    bool in_loop = false;  ///< users with at least one LIKE; always false for news
    std::uint64_t likes = 0;
    double x = 0.0;
    double y = 0.0;
};

/// Two-component PCA over every user latent and every active news latent.
/// Users come first, then news in id order.
std::vector<ProjectionRow> latent_projection(const SimState& state);

/// Header "round,id,kind,in_loop,likes,x,y".
void write_projection_csv(std::ostream& out, Round round, std::span<const ProjectionRow> rows);
void export_latent_projection(const SimState& state, const std::filesystem::path& path);

struct ExplanationRow {
    Round round = 0;
    UserId user = 0;
    bool in_loop = false;
    std::size_t rank = 0;  ///< 1-based
    std::string token;
    double cosine = 0.0;
};

/// Nearest wordbase tokens of each requested user's current latent.
std::vector<ExplanationRow> explain_users(const SimState& state, const embeddings::Wordbase& wordbase,
                                          std::span<const UserId> users, std::size_t k = 3);

/// Header "round,user_id,in_loop,rank,token,cosine".
std::string explanation_csv_header();
void write_explanation_rows(std::ostream& out, std::span<const ExplanationRow> rows);

/// `count` user ids spread evenly over [0, user_count).
std::vector<UserId> sample_explained_users(std::size_t user_count, std::size_t count);

}  // namespace nre::engine
