#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "nre/ids.hpp"

namespace nre::datagen {

struct Interaction {
    UserId user = 0;
    NewsId news = 0;
    bool positive = false;
};

/// Historical user-news interactions of the source platform.
struct InteractionLog {
    std::vector<Interaction> records;
    std::size_t user_count = 0;  ///< max user id + 1
    std::size_t news_count = 0;  ///< max news id + 1
};

/// CSV with header "user_id,news_id,positive"; positive is 0 or 1.
InteractionLog read_interaction_log(std::istream& in);
InteractionLog load_interaction_log(const std::filesystem::path& path);

}  // namespace nre::datagen
