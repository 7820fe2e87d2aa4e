#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "nre/core/math.hpp"
#include "nre/engine/export.hpp"
#include "nre/engine/simulation.hpp"
#include "nre/engine/snapshot.hpp"
#include "nre/error.hpp"
#include "support/fixtures.hpp"

namespace nre::engine {
namespace {

using nre::testing::read_file;
using nre::testing::TempDir;
using nre::testing::tiny_config;

TEST(Engine, ActiveNewsCountAndClicks) {
    auto cfg = tiny_config();
    const auto pop = generate_bootstrap_population(cfg);
    RoundTrace trace;
    auto state = initialize_simulation(pop.population, cfg, &trace);
    const std::size_t km = cfg.news_per_creator * cfg.num_creators;
    EXPECT_EQ(state.active_news.size(), km);
    for (Round r = 1; r <= 6; ++r) {
        const auto& rep = run_round(state, cfg, &trace);
        EXPECT_EQ(rep.round, r);
        EXPECT_EQ(rep.active_news, km * std::min<std::size_t>(cfg.active_rounds, r + 1));
        EXPECT_EQ(rep.total_clicks, cfg.num_users * cfg.n_click);
        EXPECT_EQ(trace.fresh_news.size(), km);
        EXPECT_NO_THROW(check_state(state));
    }
}

TEST(Engine, RoundZeroListsAreRandomAndFull) {
    auto cfg = tiny_config();
    const auto pop = generate_bootstrap_population(cfg);
    RoundTrace trace;
    const auto state = initialize_simulation(pop.population, cfg, &trace);
    ASSERT_EQ(trace.users.size(), cfg.num_users);
    for (const auto& u : trace.users) {
        EXPECT_EQ(u.slate.size(), cfg.list_length);
        std::set<NewsId> distinct(u.slate.items.begin(), u.slate.items.end());
        EXPECT_EQ(distinct.size(), u.slate.size());
    }
    EXPECT_TRUE(state.reports.empty());
}

TEST(Engine, PopulationSizeMismatch) {
    auto cfg = tiny_config();
    const auto pop = generate_bootstrap_population(cfg);
    cfg.num_users = 61;
    EXPECT_THROW(initialize_simulation(pop.population, cfg), ValidationError);
}

TEST(Engine, SingleRoundGivesOneReport) {
    auto cfg = tiny_config();
    cfg.rounds = 1;
    EXPECT_EQ(run_simulation(cfg).reports.size(), 1u);
}

TEST(Engine, SameSeedSameBytesAndSeedsMatter) {
    const auto cfg = tiny_config();
    TempDir a("eng_a"), b("eng_b");
    run_simulation(cfg, {a.path()});
    run_simulation(cfg, {b.path()});
    const auto csv = read_file(a.path() / "metrics.csv");
    EXPECT_EQ(csv, read_file(b.path() / "metrics.csv"));
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
    EXPECT_EQ(read_file(a.path() / "projections" / "round_004.csv"),
              read_file(b.path() / "projections" / "round_004.csv"));
    EXPECT_EQ(read_file(a.path() / "snapshots" / "round_006.json"),
              read_file(b.path() / "snapshots" / "round_006.json"));

    const auto other = run_simulation(tiny_config(6));
    const auto first = run_simulation(cfg);
    EXPECT_NE(other.reports, first.reports);
}

TEST(Engine, OutputLayout) {
    const auto cfg = tiny_config();
    TempDir dir("layout");
    const auto gen = generate_bootstrap_population(cfg);
    const embeddings::Wordbase wb(*gen.word_table, gen.wordbase_tokens);
    RunOptions opt;
    opt.out_dir = dir.path();
    opt.population = &gen.population;
    opt.wordbase = &wb;
    run_simulation(cfg, opt);
    for (const char* f : {"config.txt", "metrics.csv", "explanations.csv", "projections/round_000.csv",
                          "projections/round_002.csv", "projections/round_006.csv", "snapshots/round_006.json"})
        EXPECT_TRUE(std::filesystem::exists(dir.path() / f)) << f;
    const auto expl = read_file(dir.path() / "explanations.csv");
    // header + 4 sampled rounds x 3 users x top-3
    EXPECT_EQ(std::count(expl.begin(), expl.end(), '\n'), 1 + 4 * 3 * 3);
    EXPECT_EQ(config_to_map(load_config(dir.path() / "config.txt")), config_to_map(cfg));
}

TEST(Snapshot, ReplayMatchesUninterruptedRun) {
    auto cfg = tiny_config();
    const auto full = run_simulation(cfg);

    auto partial_cfg = cfg;
    partial_cfg.rounds = 3;
    const auto partial = run_simulation(partial_cfg);
    const auto text = snapshot_text(partial.state, cfg);
    auto restored = parse_snapshot(text);
    EXPECT_EQ(snapshot_text(restored.state, restored.config), text);
    const auto resumed = resume_simulation(std::move(restored.state), cfg);
    EXPECT_EQ(resumed.reports, full.reports);
    EXPECT_EQ(snapshot_text(resumed.state, cfg), snapshot_text(full.state, cfg));
}

TEST(Snapshot, RejectsBrokenFiles) {
    const auto cfg = tiny_config();
    auto small = cfg;
    small.rounds = 2;
    const auto res = run_simulation(small);
    const auto text = snapshot_text(res.state, small);
    EXPECT_THROW(parse_snapshot(text.substr(0, text.size() / 2)), FormatError);
    auto bumped = text;
    const auto pos = bumped.find("\"version\":1");
    ASSERT_NE(pos, std::string::npos);
    bumped.replace(pos, 11, "\"version\":9");
    EXPECT_THROW(parse_snapshot(bumped), FormatError);
    EXPECT_THROW(parse_snapshot("{\"format\":\"other\"}"), FormatError);

    TempDir dir("diag");
    save_diagnostic_snapshot(dir.path() / "d.json", res.state, small, "boom");
    EXPECT_THROW(load_snapshot(dir.path() / "d.json"), FormatError);
    save_snapshot(dir.path() / "s.json", res.state, small);
    EXPECT_EQ(load_snapshot(dir.path() / "s.json").state.round, 2u);
}

TEST(Projection, RowsAndFlags) {
    auto cfg = tiny_config();
    cfg.rounds = 2;
    const auto res = run_simulation(cfg);
    const auto rows = latent_projection(res.state);
    ASSERT_EQ(rows.size(), cfg.num_users + res.state.active_news.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i < cfg.num_users) {
            EXPECT_TRUE(rows[i].is_user);
            EXPECT_EQ(rows[i].in_loop, res.state.users[i].total_likes > 0);
            EXPECT_EQ(rows[i].likes, res.state.users[i].total_likes);
        } else {
            EXPECT_FALSE(rows[i].is_user);
            EXPECT_FALSE(rows[i].in_loop);
        }
    }
    const auto again = latent_projection(run_simulation(cfg).state);
    for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i].x, again[i].x);
}

TEST(Explanations, UserOnAWordComesFirst) {
    auto cfg = tiny_config();
    cfg.rounds = 1;
    auto res = run_simulation(cfg);
    embeddings::EmbeddingTable table;
    table.add("alpha", res.state.users[0].latent);
    LatentVector other = res.state.users[0].latent;
    other[0] += 5.0;
    table.add("beta", other);
    LatentVector third(other.size(), 0.0);
    third[1] = -1.0;
    table.add("gamma", third);
    const std::vector<std::string> tokens{"alpha", "beta", "gamma"};
    const embeddings::Wordbase wb(table, tokens);
    const std::vector<UserId> ids{0, 7};
    const auto rows = explain_users(res.state, wb, ids, 2);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0].token, "alpha");
    EXPECT_NEAR(rows[0].cosine, 1.0, 1e-12);
    EXPECT_EQ(rows[1].rank, 2u);
    EXPECT_EQ(rows[2].user, 7u);
    const std::vector<UserId> bad{999};
    EXPECT_THROW(explain_users(res.state, wb, bad, 2), Error);
    EXPECT_EQ(sample_explained_users(10, 3), (std::vector<UserId>{0, 3, 6}));
}

}  // namespace
}  // namespace nre::engine
