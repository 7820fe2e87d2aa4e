#include "nre/datagen/interaction_log.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <string>

#include "nre/error.hpp"

namespace nre::datagen {
namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::uint64_t parse_id(const std::string& field, const char* name, std::size_t line) {
    std::uint64_t value = 0;
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (field.empty() || ec != std::errc{} || ptr != last || value > 0xFFFFFFFEULL) {
        throw ParseError(std::string("invalid ") + name + " '" + field + "'", line);
    }
    return value;
}

}  // namespace

InteractionLog read_interaction_log(std::istream& in) {
    InteractionLog log;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != "user_id,news_id,positive") {
                throw ParseError("expected header 'user_id,news_id,positive'", line_no);
            }
            header_seen = true;
            continue;
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            fields.push_back(trim(line.substr(start, comma - start)));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 3) throw ParseError("expected 3 fields", line_no);
        Interaction rec;
        rec.user = static_cast<UserId>(parse_id(fields[0], "user_id", line_no));
        rec.news = static_cast<NewsId>(parse_id(fields[1], "news_id", line_no));
        if (fields[2] == "1") {
            rec.positive = true;
        } else if (fields[2] == "0") {
            rec.positive = false;
        } else {
            throw ParseError("positive must be 0 or 1", line_no);
        }
        log.user_count = std::max<std::size_t>(log.user_count, rec.user + std::size_t{1});
        log.news_count = std::max<std::size_t>(log.news_count, rec.news + std::size_t{1});
        log.records.push_back(rec);
    }
    if (!header_seen) throw ParseError("interaction log is empty", 0);
    return log;
}

InteractionLog load_interaction_log(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open interaction log " + path.string());
    return read_interaction_log(in);
}

}  // namespace nre::datagen
