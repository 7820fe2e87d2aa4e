#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nre/ids.hpp"
#include "nre/recsys/channels.hpp"

namespace nre::metrics {

/// Every metric of one simulated round.
struct RoundReport {
    Round round = 0;
    std::uint64_t active_news = 0;
    std::uint64_t total_clicks = 0;
    std::uint64_t total_likes = 0;
    double avg_likes_per_user = 0.0;
    std::optional<double> gini_users;
    std::optional<double> gini_news;
    std::optional<double> gini_creators;
    std::uint64_t covered_users = 0;
    std::uint64_t covered_news = 0;
    std::optional<double> avg_quality;
    std::optional<double> weighted_quality;
    std::optional<double> pearson_quality_likes;
    std::optional<double> jaccard;
    std::optional<double> user_news_cosine;
    std::uint64_t in_loop_users = 0;  ///< users with at least one cumulative LIKE
    std::optional<double> validation_mrr5;
    std::array<std::uint64_t, recsys::kChannelCount> likes_by_channel{};

    friend bool operator==(const RoundReport&, const RoundReport&) = default;
};

/// Fixed CSV column order.
const std::vector<std::string>& report_columns();

/// Header line without trailing newline.
std::string report_csv_header();

/// One CSV row: integers verbatim, reals with `digits` significant digits,
/// missing values as empty cells. 17 digits round-trip exactly.
std::string report_csv_row(const RoundReport& report, int digits = 9);

/// Parses a row produced by report_csv_row. Throws ParseError.
RoundReport parse_report_row(const std::string& line);

/// Column value as a real (missing -> nullopt), by column name.
std::optional<double> report_value(const RoundReport& report, const std::string& column);

/// Reads a whole metrics CSV (header + rows).
std::vector<RoundReport> read_report_csv(std::istream& in);

}  // namespace nre::metrics
