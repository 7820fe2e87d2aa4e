#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>

#include "nre/engine/config.hpp"

namespace nre::testing {

/// Small but non-trivial run that finishes in well under a second.
inline engine::SimConfig tiny_config(std::uint64_t seed = 5) {
    engine::ConfigMap m{{"seed", std::to_string(seed)},
                        {"num_users", "60"},
                        {"num_creators", "8"},
                        {"rounds", "6"},
                        {"news_per_creator", "3"},
                        {"active_rounds", "3"},
                        {"list_length", "20"},
                        {"budget_cold_start", "4"},
                        {"n_click", "3"},
                        {"latent_dim", "8"},
                        {"embed_dim", "8"},
                        {"max_epochs", "5"},
                        {"mrr_candidates", "20"},
                        {"projection_every", "2"},
                        {"explain_users", "3"}};
    return engine::build_config(m);
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("nre_" + tag + "_" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace nre::testing
