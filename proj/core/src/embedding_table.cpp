#include "nre/embeddings/embedding_table.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "nre/core/math.hpp"
#include "nre/error.hpp"

namespace nre::embeddings {
namespace {

bool parse_double(const std::string& field, double& out) {
    if (field.empty()) return false;
    char* end = nullptr;
    errno = 0;
    out = std::strtod(field.c_str(), &end);
    return end == field.c_str() + field.size() && errno != ERANGE && std::isfinite(out);
}

bool parse_count(const std::string& field, std::size_t& out) {
    if (field.empty() || !std::all_of(field.begin(), field.end(), [](unsigned char c) { return std::isdigit(c); })) {
        return false;
    }
    out = static_cast<std::size_t>(std::strtoull(field.c_str(), nullptr, 10));
    return true;
}

}  // namespace

void EmbeddingTable::add(std::string token, LatentVector vector) {
    if (vector.empty()) throw FormatError("embedding for '" + token + "' has no coordinates");
    if (tokens_.empty()) {
        dimension_ = vector.size();
    } else if (vector.size() != dimension_) {
        throw FormatError("embedding for '" + token + "' has dimension " + std::to_string(vector.size()) +
                          ", expected " + std::to_string(dimension_));
    }
    if (index_.contains(token)) throw FormatError("duplicate token '" + token + "'");
    index_.emplace(token, tokens_.size());
    tokens_.push_back(std::move(token));
    vectors_.push_back(std::move(vector));
}

std::size_t EmbeddingTable::find(const std::string& token) const {
    const auto it = index_.find(token);
    return it == index_.end() ? size() : it->second;
}

EmbeddingTable read_embedding_table(std::istream& in) {
    EmbeddingTable table;
    std::string line;
    std::size_t line_no = 0;
    std::size_t declared_count = 0;
    std::size_t declared_dim = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream fields(line);
        std::vector<std::string> parts;
        for (std::string f; fields >> f;) parts.push_back(std::move(f));
        if (parts.empty()) continue;

        if (line_no == 1 && parts.size() == 2 && parse_count(parts[0], declared_count) &&
            parse_count(parts[1], declared_dim)) {
            have_header = true;
            continue;
        }
        if (parts.size() < 2) throw ParseError("row has a token but no coordinates", line_no);
        std::vector<double> coords(parts.size() - 1);
        for (std::size_t i = 1; i < parts.size(); ++i) {
            if (!parse_double(parts[i], coords[i - 1])) {
                throw ParseError("malformed number '" + parts[i] + "'", line_no);
            }
        }
        if (have_header && coords.size() != declared_dim) {
            throw FormatError("line " + std::to_string(line_no) + ": dimension " + std::to_string(coords.size()) +
                              " does not match header dimension " + std::to_string(declared_dim));
        }
        try {
            table.add(parts[0], LatentVector(std::move(coords)));
        } catch (const FormatError& e) {
            throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (have_header && table.size() != declared_count) {
        throw FormatError("header declares " + std::to_string(declared_count) + " rows, found " +
                          std::to_string(table.size()));
    }
    if (table.size() == 0) throw FormatError("embedding table is empty");
    return table;
}

EmbeddingTable load_embedding_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open embedding file " + path.string());
    return read_embedding_table(in);
}

void write_embedding_table(std::ostream& out, const EmbeddingTable& table) {
    out << table.size() << ' ' << table.dimension() << '\n';
    out << std::setprecision(17);
    for (std::size_t i = 0; i < table.size(); ++i) {
        out << table.token(i);
        for (double v : table.vector(i)) out << ' ' << v;
        out << '\n';
    }
}

void save_embedding_table(const std::filesystem::path& path, const EmbeddingTable& table) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    write_embedding_table(out, table);
}

Wordbase::Wordbase(const EmbeddingTable& table, std::span<const std::string> tokens) {
    if (tokens.empty()) throw FormatError("wordbase is empty");
    dimension_ = table.dimension();
    for (const auto& token : tokens) {
        const std::size_t idx = table.find(token);
        if (idx == table.size()) throw FormatError("wordbase token '" + token + "' is not in the embedding table");
        tokens_.push_back(token);
        vectors_.push_back(table.vector(idx));
        norms_.push_back(norm(table.vector(idx)));
    }
}

std::vector<std::string> read_token_list(std::istream& in) {
    std::vector<std::string> tokens;
    std::unordered_set<std::string> seen;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::string token;
        if (!(fields >> token)) continue;
        if (seen.insert(token).second) tokens.push_back(std::move(token));
    }
    return tokens;
}

Wordbase load_wordbase(const std::filesystem::path& path, const EmbeddingTable& table) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open wordbase file " + path.string());
    const auto tokens = read_token_list(in);
    return Wordbase(table, tokens);
}

EncodedNews encode_news(std::span<const std::string> tokens, const EmbeddingTable& table) {
    EncodedNews out;
    out.latent = LatentVector(table.dimension());
    for (const auto& token : tokens) {
        const std::size_t idx = table.find(token);
        if (idx == table.size()) {
            ++out.out_of_vocabulary;
            continue;
        }
        out.latent += table.vector(idx);
        ++out.in_vocabulary;
    }
    if (out.in_vocabulary == 0) throw DegenerateInputError("news has no in-vocabulary tokens");
    out.latent *= 1.0 / static_cast<double>(out.in_vocabulary);
    return out;
}

std::vector<std::string> split_tokens(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> out;
    for (std::string t; in >> t;) out.push_back(std::move(t));
    return out;
}

std::vector<WordMatch> nearest_words(const LatentVector& v, std::size_t k, const Wordbase& wordbase) {
    if (v.size() != wordbase.dimension()) throw FormatError("query dimension does not match wordbase");
    const double query_norm = norm(v);
    if (query_norm == 0.0) throw DegenerateInputError("nearest_words of a zero vector");
    k = std::min(k, wordbase.size());

    std::vector<WordMatch> scored;
    scored.reserve(wordbase.size());
    for (std::size_t i = 0; i < wordbase.size(); ++i) {
        const double wn = wordbase.vector_norm(i);
        const double c = wn == 0.0 ? 0.0 : cosine_with_norms(v, query_norm, wordbase.vector(i), wn);
        scored.push_back({wordbase.token(i), c});
    }
    const auto better = [](const WordMatch& a, const WordMatch& b) {
        return a.cosine != b.cosine ? a.cosine > b.cosine : a.token < b.token;
    };
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end(), better);
    scored.resize(k);
    return scored;
}

}  // namespace nre::embeddings
