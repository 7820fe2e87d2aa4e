#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nre/core/rng.hpp"
#include "nre/core/sampling.hpp"
#include "nre/embeddings/embedding_table.hpp"
#include "nre/error.hpp"

namespace nre::embeddings {
namespace {

EmbeddingTable parse(const std::string& text) {
    std::istringstream in(text);
    return read_embedding_table(in);
}

TEST(EmbeddingTable, ParsesWithAndWithoutHeader) {
    const auto with = parse("2 3\nfoo 1 2 3\nbar 4 5 6\n");
    const auto without = parse("foo 1 2 3\nbar 4 5 6\n");
    ASSERT_EQ(with.size(), 2u);
    EXPECT_EQ(with.dimension(), 3u);
    EXPECT_EQ(without.size(), 2u);
    EXPECT_EQ(with.vector(with.find("bar")), (LatentVector{4, 5, 6}));
    EXPECT_FALSE(with.contains("baz"));
}

TEST(EmbeddingTable, ReportsLineOfBadRow) {
    try {
        parse("foo 1 2\nbar 1 x\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST(EmbeddingTable, RejectsDimensionMismatchAndDuplicates) {
    EXPECT_THROW(parse("foo 1 2\nbar 1 2 3\n"), FormatError);
    EXPECT_THROW(parse("foo 1 2\nfoo 3 4\n"), FormatError);
    EXPECT_THROW(parse("3 2\nfoo 1 2\n"), FormatError);
}

TEST(EmbeddingTable, WriteReadRoundTripIsExact) {
    EmbeddingTable t;
    t.add("a", {0.1, 1.0 / 3.0});
    t.add("b", {-2.5e-17, 7.0});
    std::ostringstream out;
    write_embedding_table(out, t);
    const auto back = parse(out.str());
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back.vector(0), t.vector(0));
    EXPECT_EQ(back.vector(1), t.vector(1));
}

TEST(EncodeNews, AveragesKnownTokensAndCountsUnknown) {
    const auto t = parse("a 1 0\nb 0 1\n");
    const std::vector<std::string> tokens{"a", "b", "zzz", "a"};
    const auto enc = encode_news(tokens, t);
    EXPECT_EQ(enc.in_vocabulary, 3u);
    EXPECT_EQ(enc.out_of_vocabulary, 1u);
    EXPECT_NEAR(enc.latent[0], 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(enc.latent[1], 1.0 / 3.0, 1e-15);
    const std::vector<std::string> none{"q"};
    EXPECT_THROW(encode_news(none, t), DegenerateInputError);
}

TEST(Wordbase, MissingTokenIsAnError) {
    const auto t = parse("a 1 0\n");
    const std::vector<std::string> tokens{"a", "b"};
    EXPECT_THROW(Wordbase(t, tokens), FormatError);
}

TEST(NearestWords, OwnVectorComesFirst) {
    const auto t = parse("x 1 0 0\ny 0 1 0\nz 0.9 0.1 0\n");
    const std::vector<std::string> tokens{"x", "y", "z"};
    const Wordbase wb(t, tokens);
    const auto m = nearest_words(t.vector(1), 3, wb);
    ASSERT_EQ(m.size(), 3u);
    EXPECT_EQ(m[0].token, "y");
    EXPECT_NEAR(m[0].cosine, 1.0, 1e-15);
}

TEST(NearestWords, MatchesBruteForceOnRandomTables) {
    RngStream rng(21, "nn");
    for (int trial = 0; trial < 20; ++trial) {
        EmbeddingTable t;
        std::vector<std::string> tokens;
        for (int i = 0; i < 60; ++i) {
            LatentVector v(8);
            for (double& x : v) x = rng.normal();
            tokens.push_back("w" + std::to_string(i));
            t.add(tokens.back(), v);
        }
        const Wordbase wb(t, tokens);
        LatentVector q(8);
        for (double& x : q) x = rng.normal();

        std::vector<std::pair<double, std::string>> all;
        for (std::size_t i = 0; i < t.size(); ++i) {
            double d = 0, nq = 0, nv = 0;
            for (int k = 0; k < 8; ++k) {
                d += q[k] * t.vector(i)[k];
                nq += q[k] * q[k];
                nv += t.vector(i)[k] * t.vector(i)[k];
            }
            all.emplace_back(d / std::sqrt(nq * nv), t.token(i));
        }
        std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
            return a.first != b.first ? a.first > b.first : a.second < b.second;
        });
        const auto got = nearest_words(q, 5, wb);
        ASSERT_EQ(got.size(), 5u);
        for (int k = 0; k < 5; ++k) {
            EXPECT_EQ(got[k].token, all[k].second);
            EXPECT_NEAR(got[k].cosine, all[k].first, 1e-12);
        }
    }
}

TEST(NearestWords, ZeroQueryIsRejected) {
    const auto t = parse("x 1 0\n");
    const std::vector<std::string> tokens{"x"};
    const Wordbase wb(t, tokens);
    EXPECT_THROW(nearest_words(LatentVector{0.0, 0.0}, 1, wb), DegenerateInputError);
}

TEST(TokenList, SkipsBlanksAndDuplicates) {
    std::istringstream in("a\n\nb\na\n");
    EXPECT_EQ(read_token_list(in), (std::vector<std::string>{"a", "b"}));
}

}  // namespace
}  // namespace nre::embeddings
