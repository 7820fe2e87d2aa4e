#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nre/core/latent.hpp"

namespace nre::embeddings {

/// Immutable token -> vector table. All vectors share one dimension and
/// tokens are unique.
class EmbeddingTable {
public:
    EmbeddingTable() = default;

    /// Throws FormatError on a duplicate token or a dimension mismatch.
    void add(std::string token, LatentVector vector);

    std::size_t size() const noexcept { return tokens_.size(); }
    std::size_t dimension() const noexcept { return dimension_; }

    const std::string& token(std::size_t index) const { return tokens_.at(index); }
    const LatentVector& vector(std::size_t index) const { return vectors_.at(index); }

    /// Index of `token`, or size() when absent.
    std::size_t find(const std::string& token) const;
    bool contains(const std::string& token) const { return find(token) != size(); }

private:
    std::vector<std::string> tokens_;
    std::vector<LatentVector> vectors_;
    std::unordered_map<std::string, std::size_t> index_;
    std::size_t dimension_ = 0;
};

/// Whitespace-separated "<token> <f1> ... <fd>" rows with an optional
/// "<count> <dim>" header line. Errors carry the 1-based line number.
EmbeddingTable read_embedding_table(std::istream& in);
EmbeddingTable load_embedding_table(const std::filesystem::path& path);

/// Writes with a "<count> <dim>" header and 17 significant digits.
void write_embedding_table(std::ostream& out, const EmbeddingTable& table);
void save_embedding_table(const std::filesystem::path& path, const EmbeddingTable& table);

/// Subset of a table whose tokens are used for textual explanation.
class Wordbase {
public:
    /// Throws FormatError when a token is missing from `table` or the list is empty.
    Wordbase(const EmbeddingTable& table, std::span<const std::string> tokens);

    std::size_t size() const noexcept { return tokens_.size(); }
    std::size_t dimension() const noexcept { return dimension_; }
    const std::string& token(std::size_t i) const { return tokens_[i]; }
    const LatentVector& vector(std::size_t i) const { return vectors_[i]; }
    double vector_norm(std::size_t i) const { return norms_[i]; }

private:
    std::vector<std::string> tokens_;
    std::vector<LatentVector> vectors_;
    std::vector<double> norms_;
    std::size_t dimension_ = 0;
};

/// One token per line; blank lines are ignored, duplicates collapse.
std::vector<std::string> read_token_list(std::istream& in);
Wordbase load_wordbase(const std::filesystem::path& path, const EmbeddingTable& table);

struct EncodedNews {
    LatentVector latent;
    std::size_t in_vocabulary = 0;
    std::size_t out_of_vocabulary = 0;
};

/// Mean of the in-vocabulary token vectors. Throws DegenerateInputError
/// when no token is in the table.
EncodedNews encode_news(std::span<const std::string> tokens, const EmbeddingTable& table);

/// Splits on ASCII whitespace.
std::vector<std::string> split_tokens(const std::string& text);

struct WordMatch {
    std::string token;
    double cosine = 0.0;
};

/// The k wordbase tokens most cosine-similar to `v`, descending, ties broken
/// by token. Exact linear scan. Throws DegenerateInputError for a zero vector.
std::vector<WordMatch> nearest_words(const LatentVector& v, std::size_t k, const Wordbase& wordbase);

}  // namespace nre::embeddings
