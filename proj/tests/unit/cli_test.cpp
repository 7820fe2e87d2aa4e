#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <sstream>

#include "nre/metrics/round_report.hpp"
#include "nresim_cli/cli.hpp"
#include "support/fixtures.hpp"

namespace nre::cli {
namespace {

using nre::testing::read_file;
using nre::testing::TempDir;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> with_tiny(std::vector<std::string> head, std::map<std::string, std::string> overrides = {}) {
    std::map<std::string, std::string> flags{{"num-users", "40"},      {"num-creators", "6"}, {"rounds", "4"},
                                             {"news-per-creator", "2"}, {"list-length", "30"}, {"budget-cold-start", "2"},
                                             {"n-click", "2"},          {"latent-dim", "6"},   {"embed-dim", "6"},
                                             {"max-epochs", "3"},       {"mrr-candidates", "10"},
                                             {"active-rounds", "2"}};
    for (auto& [k, v] : overrides) flags[k] = v;
    for (const auto& [k, v] : flags) {
        head.push_back("--" + k);
        head.push_back(v);
    }
    return head;
}

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(invoke({}).code, kExitUsage);
    EXPECT_EQ(invoke({"frobnicate"}).code, kExitUsage);
    EXPECT_EQ(invoke({"simulate"}).code, kExitUsage);  // --out-dir missing
    const auto bad = invoke({"validate-config", "--strategy", "nope"});
    EXPECT_EQ(bad.code, kExitUsage);
    EXPECT_NE(bad.err.find("promo-creator"), std::string::npos);
    EXPECT_EQ(invoke({"validate-config", "--seed", "-1"}).code, kExitUsage);
    EXPECT_EQ(invoke({"validate-config", "--budget-breaking", "10", "--budget-algorithmic", "80"}).code, kExitUsage);
}

TEST(Cli, HelpListsEveryKey) {
    const auto help = invoke({"simulate", "--help"});
    EXPECT_EQ(help.code, kExitOk);
    for (const auto& k : engine::config_keys()) EXPECT_NE(help.out.find("--" + engine::key_to_flag(k.name)), std::string::npos) << k.name;
}

TEST(Cli, ValidateConfigPrintsResolvedValues) {
    const auto r = invoke({"validate-config", "--strategy", "breaking", "--num-users", "77"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("num_users = 77"), std::string::npos);
    EXPECT_NE(r.out.find("budget_algorithmic = 60"), std::string::npos);

    TempDir dir("cfg");
    std::ofstream(dir.path() / "c.txt") << "num_users = 10\nseed = 3\n";
    const auto f = invoke({"validate-config", "--config", (dir.path() / "c.txt").string(), "--seed", "9"});
    ASSERT_EQ(f.code, kExitOk);
    EXPECT_NE(f.out.find("num_users = 10"), std::string::npos);
    EXPECT_NE(f.out.find("seed = 9"), std::string::npos);
}

TEST(Cli, GenerateIsDeterministic) {
    TempDir a("gen_a"), b("gen_b");
    ASSERT_EQ(invoke(with_tiny({"generate", "--seed", "7", "--out", a.path().string()})).code, kExitOk);
    ASSERT_EQ(invoke(with_tiny({"generate", "--seed", "7", "--out", b.path().string()})).code, kExitOk);
    for (const char* f : {"population.json", "gmm_summary.json", "wordbase.txt", "wordbase_embeddings.txt"})
        EXPECT_EQ(read_file(a.path() / f), read_file(b.path() / f)) << f;
}

TEST(Cli, RealDataModeInputs) {
    TempDir dir("real");
    std::ofstream(dir.path() / "emb.txt") << "2 3\nalpha 1 0 0\nbeta 0 1\n";
    std::ofstream(dir.path() / "log.csv") << "user_id,news_id,positive\n0,0,1\n";
    std::ofstream(dir.path() / "news.csv") << "news_id,creator_id,category,text\n0,0,,alpha\n";
    const auto partial = invoke({"generate", "--embeddings", (dir.path() / "emb.txt").string(), "--out",
                                 (dir.path() / "o").string()});
    EXPECT_EQ(partial.code, kExitUsage);
    const auto malformed = invoke({"generate", "--embeddings", (dir.path() / "emb.txt").string(), "--interactions",
                                   (dir.path() / "log.csv").string(), "--news", (dir.path() / "news.csv").string(),
                                   "--out", (dir.path() / "o").string()});
    EXPECT_EQ(malformed.code, kExitFailure);
    EXPECT_NE(malformed.err.find("line 3"), std::string::npos) << malformed.err;
}

TEST(Cli, SimulateExplainProjectAndResume) {
    TempDir dir("sim");
    const auto run_dir = dir.path() / "run";
    const auto r = invoke(with_tiny({"simulate", "--out-dir", run_dir.string()}));
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.err.find("round 4"), std::string::npos);
    EXPECT_TRUE(std::filesystem::exists(run_dir / "metrics.csv"));
    EXPECT_TRUE(std::filesystem::exists(run_dir / "explanations.csv"));
    const auto snap = run_dir / "snapshots" / "round_004.json";
    ASSERT_TRUE(std::filesystem::exists(snap));

    const auto ex = invoke({"explain", "--snapshot", snap.string(), "--embeddings",
                            (run_dir / "wordbase_embeddings.txt").string(), "--users", "0,5", "--k", "2"});
    ASSERT_EQ(ex.code, kExitOk) << ex.err;
    EXPECT_EQ(std::count(ex.out.begin(), ex.out.end(), '\n'), 1 + 2 * 2);

    const auto pr = invoke({"project", "--snapshot", snap.string()});
    ASSERT_EQ(pr.code, kExitOk) << pr.err;
    EXPECT_EQ(pr.out.rfind("round,id,kind,in_loop,likes,x,y\n", 0), 0u);

    const auto shorter = with_tiny({"simulate", "--quiet", "--out-dir", (dir.path() / "half").string()}, {{"rounds", "2"}});
    ASSERT_EQ(invoke(shorter).code, kExitOk);
    const auto resumed = invoke(with_tiny({"simulate", "--quiet", "--resume",
                                           (dir.path() / "half" / "snapshots" / "round_002.json").string(),
                                           "--out-dir", (dir.path() / "resumed").string()}));
    ASSERT_EQ(resumed.code, kExitOk) << resumed.err;
    EXPECT_EQ(read_file(dir.path() / "resumed" / "metrics.csv"), read_file(run_dir / "metrics.csv"));
}

TEST(Cli, SweepLayoutAndCounts) {
    TempDir dir("sweep");
    const auto r = invoke(with_tiny({"sweep", "--quiet", "--strategies", "default,breaking", "--repeats", "2",
                                     "--out-dir", dir.path().string()}));
    ASSERT_EQ(r.code, kExitOk) << r.err;
    for (const char* d : {"default_run0", "default_run1", "breaking_run0", "breaking_run1"})
        EXPECT_TRUE(std::filesystem::exists(dir.path() / d / "metrics.csv")) << d;
    const auto merged = read_file(dir.path() / "sweep_long.csv");
    const long metrics = static_cast<long>(metrics::report_columns().size()) - 1;
    EXPECT_EQ(std::count(merged.begin(), merged.end(), '\n'), 1 + 2 * 2 * 4 * metrics);
    EXPECT_NE(read_file(dir.path() / "default_run0" / "metrics.csv"),
              read_file(dir.path() / "default_run1" / "metrics.csv"));
    EXPECT_EQ(invoke({"sweep", "--repeats", "0", "--out-dir", dir.path().string()}).code, kExitUsage);
}

}  // namespace
}  // namespace nre::cli
