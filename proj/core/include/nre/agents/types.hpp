#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "nre/core/latent.hpp"
#include "nre/ids.hpp"

namespace nre::agents {

struct NewsItem {
    NewsId id = 0;
    CreatorId creator = 0;
    LatentVector latent;
    double latent_norm = 0.0;
    double quality = 0.0;  ///< ln(D^C + 1) of the creator at creation time
    Round created_round = 0;
    Round active_rounds = 1;  ///< S; active during [created, created + S - 1]
    /// LIKEs received in each round of the activity window, indexed by age.
    std::vector<std::uint32_t> likes_by_age;
    std::uint64_t total_likes = 0;

    Round last_active_round() const noexcept { return created_round + active_rounds - 1; }
    bool active_in(Round r) const noexcept { return r >= created_round && r <= last_active_round(); }
    /// LIKEs received during round r; 0 outside the activity window.
    std::uint32_t likes_in(Round r) const noexcept {
        return active_in(r) ? likes_by_age[r - created_round] : 0;
    }
};

struct UserState {
    UserId id = 0;
    LatentVector latent;
    double threshold = 0.0;
    double alpha = 0.0;
    double concentration = 0.0;
    std::size_t component = 0;
    std::vector<NewsId> clicked;  ///< sorted, unique
    std::vector<NewsId> liked;    ///< sorted, unique, subset of clicked
    std::uint64_t total_likes = 0;
    std::map<CreatorId, std::uint32_t> likes_by_creator;

    bool has_clicked(NewsId n) const;
    bool has_liked(NewsId n) const;
};

struct CreatorState {
    CreatorId id = 0;
    LatentVector latent;
    double concentration = 0.0;  ///< rho^C in [0, 1]
    std::size_t component = 0;
    std::vector<NewsId> owned;
    std::uint64_t last_round_likes = 0;  ///< D^C
};

/// Inserts into a sorted unique id vector.
void insert_sorted(std::vector<NewsId>& ids, NewsId id);

}  // namespace nre::agents
