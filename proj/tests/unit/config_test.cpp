#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nre/engine/config.hpp"
#include "nre/error.hpp"

namespace nre::engine {
namespace {

ConfigMap parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config_text(in);
}

TEST(Config, EmptyInputGivesDefaults) {
    const auto c = build_config(parse(""));
    EXPECT_EQ(c.num_users, 10000u);
    EXPECT_EQ(c.num_creators, 1000u);
    EXPECT_EQ(c.rounds, 100u);
    EXPECT_EQ(c.news_per_creator, 5u);
    EXPECT_EQ(c.list_length, 100u);
    EXPECT_EQ(c.budgets.algorithmic, 80u);
    EXPECT_EQ(c.budgets.cold_start, 20u);
    EXPECT_EQ(c.n_click, 10u);
    EXPECT_DOUBLE_EQ(c.p_like, 0.1);
    EXPECT_DOUBLE_EQ(c.train.learning_rate, 1e-3);
    EXPECT_EQ(c.train.batch_size, 1024u);
    EXPECT_EQ(c.train.patience, 3u);
    EXPECT_EQ(c.train.negative_ratio, 9u);
    EXPECT_EQ(c.strategy, Strategy::Default);
}

TEST(Config, BudgetSumRule) {
    EXPECT_THROW(build_config(parse("budget_algorithmic = 80\nbudget_cold_start = 20\nbudget_breaking = 10\n")),
                 ValidationError);
    const auto c = build_config(parse("list_length = 40\nbudget_cold_start = 10\n"));
    EXPECT_EQ(c.budgets.algorithmic, 30u);
}

TEST(Config, RejectsBadValues) {
    EXPECT_THROW(build_config(parse("seed = -3\n")), ValidationError);
    EXPECT_THROW(build_config(parse("no_such_key = 1\n")), ValidationError);
    EXPECT_THROW(build_config(parse("rounds = 0\n")), ValidationError);
    EXPECT_THROW(build_config(parse("p_like = 1.5\n")), ValidationError);
    EXPECT_THROW(build_config(parse("num_users = many\n")), ValidationError);
    try {
        build_config(parse("strategy = fancy\n"));
        FAIL();
    } catch (const ValidationError& e) {
        const std::string what = e.what();
        for (const auto& name : strategy_names()) EXPECT_NE(what.find(name), std::string::npos);
    }
    EXPECT_THROW(parse("x = 1\nx = 2\n"), ParseError);
    EXPECT_THROW(parse("just words\n"), ParseError);
}

TEST(Config, CommentsAndJson) {
    const auto text = build_config(parse("# desk\nnum_users = 500  # inline\n\nseed=7\n"));
    EXPECT_EQ(text.num_users, 500u);
    EXPECT_EQ(text.seed, 7u);
    const auto json = build_config(parse("{\"num_users\": 500, \"seed\": \"7\", \"strategy\": \"breaking\"}"));
    EXPECT_EQ(json.num_users, 500u);
    EXPECT_EQ(json.seed, 7u);
    EXPECT_EQ(json.strategy, Strategy::Breaking);
}

TEST(Config, StrategyPresets) {
    const auto breaking = build_config(parse("strategy = breaking\n"));
    EXPECT_EQ(breaking.budgets.breaking, 20u);
    EXPECT_EQ(breaking.budgets.algorithmic, 60u);
    const auto creator = build_config(parse("strategy = promo-creator\n"));
    EXPECT_EQ(creator.budgets.promotion, 20u);
    EXPECT_EQ(creator.promotion_mode, recsys::PromotionMode::Creator);
    EXPECT_EQ(creator.budgets.algorithmic, 60u);
    EXPECT_EQ(build_config(parse("strategy = promo-topic\n")).promotion_mode, recsys::PromotionMode::Topic);
    const auto cold = build_config(parse("strategy = cold-affinity\n"));
    EXPECT_EQ(cold.cold_start_mode, recsys::ColdStartMode::Affinity);
    EXPECT_EQ(cold.budgets.algorithmic, 80u);
    // explicit keys beat the preset
    EXPECT_EQ(build_config(parse("strategy = breaking\nbudget_breaking = 5\n")).budgets.algorithmic, 75u);
}

TEST(Config, MapRoundTripAndFile) {
    auto c = build_config(parse("strategy = promo-topic\nnum_users = 321\ndrift_delta = 0.123456789012345\n"));
    const auto map = config_to_map(c);
    EXPECT_EQ(config_to_map(build_config(map)), map);
    EXPECT_EQ(map.size(), config_keys().size());

    const auto path = std::filesystem::temp_directory_path() / "nre_config_test.txt";
    {
        std::ofstream out(path);
        out << render_config(c);
    }
    EXPECT_EQ(config_to_map(load_config(path)), map);
    std::filesystem::remove(path);
    EXPECT_EQ(key_to_flag("budget_cold_start"), "budget-cold-start");
}

}  // namespace
}  // namespace nre::engine
