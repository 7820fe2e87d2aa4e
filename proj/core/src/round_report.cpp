#include "nre/metrics/round_report.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <istream>
#include <sstream>

#include "nre/error.hpp"

namespace nre::metrics {
namespace {

using Opt = std::optional<double>;

struct Column {
    std::string name;
    // Exactly one of the accessors is set.
    std::function<std::uint64_t&(RoundReport&)> count;
    std::function<Opt&(RoundReport&)> real;
    std::function<double&(RoundReport&)> plain;
};

std::vector<Column> build_columns() {
    std::vector<Column> cols;
    const auto add_count = [&](std::string name, std::function<std::uint64_t&(RoundReport&)> f) {
        cols.push_back({std::move(name), std::move(f), nullptr, nullptr});
    };
    const auto add_real = [&](std::string name, std::function<Opt&(RoundReport&)> f) {
        cols.push_back({std::move(name), nullptr, std::move(f), nullptr});
    };
    add_count("active_news", [](RoundReport& r) -> std::uint64_t& { return r.active_news; });
    add_count("total_clicks", [](RoundReport& r) -> std::uint64_t& { return r.total_clicks; });
    add_count("total_likes", [](RoundReport& r) -> std::uint64_t& { return r.total_likes; });
    cols.push_back({"avg_likes_per_user", nullptr, nullptr, [](RoundReport& r) -> double& { return r.avg_likes_per_user; }});
    add_real("gini_users", [](RoundReport& r) -> Opt& { return r.gini_users; });
    add_real("gini_news", [](RoundReport& r) -> Opt& { return r.gini_news; });
    add_real("gini_creators", [](RoundReport& r) -> Opt& { return r.gini_creators; });
    add_count("covered_users", [](RoundReport& r) -> std::uint64_t& { return r.covered_users; });
    add_count("covered_news", [](RoundReport& r) -> std::uint64_t& { return r.covered_news; });
    add_real("avg_quality", [](RoundReport& r) -> Opt& { return r.avg_quality; });
    add_real("weighted_quality", [](RoundReport& r) -> Opt& { return r.weighted_quality; });
    add_real("pearson_quality_likes", [](RoundReport& r) -> Opt& { return r.pearson_quality_likes; });
    add_real("jaccard", [](RoundReport& r) -> Opt& { return r.jaccard; });
    add_real("user_news_cosine", [](RoundReport& r) -> Opt& { return r.user_news_cosine; });
    add_count("in_loop_users", [](RoundReport& r) -> std::uint64_t& { return r.in_loop_users; });
    add_real("validation_mrr5", [](RoundReport& r) -> Opt& { return r.validation_mrr5; });
    for (std::size_t c = 0; c < recsys::kChannelCount; ++c) {
        std::string name = "likes_" + std::string(recsys::to_string(static_cast<recsys::Channel>(c)));
        for (char& ch : name) {
            if (ch == '-') ch = '_';
        }
        add_count(name, [c](RoundReport& r) -> std::uint64_t& { return r.likes_by_channel[c]; });
    }
    return cols;
}

const std::vector<Column>& columns() {
    static const std::vector<Column> cols = build_columns();
    return cols;
}

std::string format_real(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

const std::vector<std::string>& report_columns() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n{"round"};
        for (const auto& c : columns()) n.push_back(c.name);
        return n;
    }();
    return names;
}

std::string report_csv_header() {
    std::string out;
    for (const auto& n : report_columns()) {
        if (!out.empty()) out += ',';
        out += n;
    }
    return out;
}

std::string report_csv_row(const RoundReport& report, int digits) {
    RoundReport r = report;
    std::string out = std::to_string(r.round);
    for (const auto& c : columns()) {
        out += ',';
        if (c.count) {
            out += std::to_string(c.count(r));
        } else if (c.plain) {
            out += format_real(c.plain(r), digits);
        } else if (const auto& v = c.real(r)) {
            out += format_real(*v, digits);
        }
    }
    return out;
}

RoundReport parse_report_row(const std::string& line) {
    const auto fields = split_csv(line);
    if (fields.size() != report_columns().size()) {
        throw ParseError("metrics row has " + std::to_string(fields.size()) + " fields, expected " +
                         std::to_string(report_columns().size()), 0);
    }
    const auto parse_u64 = [](const std::string& f, const std::string& name) {
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (f.empty() || ec != std::errc{} || ptr != f.data() + f.size()) throw ParseError("bad integer in " + name, 0);
        return v;
    };
    const auto parse_real = [](const std::string& f, const std::string& name) {
        char* end = nullptr;
        const double v = std::strtod(f.c_str(), &end);
        if (f.empty() || end != f.c_str() + f.size()) throw ParseError("bad number in " + name, 0);
        return v;
    };
    RoundReport r;
    r.round = static_cast<Round>(parse_u64(fields[0], "round"));
    for (std::size_t k = 0; k < columns().size(); ++k) {
        const auto& c = columns()[k];
        const auto& f = fields[k + 1];
        if (c.count) {
            c.count(r) = parse_u64(f, c.name);
        } else if (c.plain) {
            c.plain(r) = parse_real(f, c.name);
        } else if (!f.empty()) {
            c.real(r) = parse_real(f, c.name);
        }
    }
    return r;
}

std::optional<double> report_value(const RoundReport& report, const std::string& column) {
    RoundReport r = report;
    if (column == "round") return static_cast<double>(r.round);
    for (const auto& c : columns()) {
        if (c.name != column) continue;
        if (c.count) return static_cast<double>(c.count(r));
        if (c.plain) return c.plain(r);
        return c.real(r);
    }
    throw Error("unknown metrics column '" + column + "'");
}

std::vector<RoundReport> read_report_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != report_csv_header()) throw ParseError("metrics CSV header mismatch", 1);
    std::vector<RoundReport> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            out.push_back(parse_report_row(line));
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    return out;
}

}  // namespace nre::metrics
