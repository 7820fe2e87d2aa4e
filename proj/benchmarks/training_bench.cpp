#include <algorithm>
#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "nre/core/rng.hpp"
#include "nre/recsys/training.hpp"

namespace {

void BM_TrainRankingModel(benchmark::State& state) {
    const std::size_t users = 500, news = 250, likes = static_cast<std::size_t>(state.range(0));
    nre::RngStream rng(4, "bench-train");
    std::vector<nre::recsys::LikeEvent> events;
    std::vector<std::vector<nre::NewsId>> liked(users);
    for (std::size_t k = 0; k < likes; ++k) {
        const auto u = static_cast<nre::UserId>(rng.uniform_index(users));
        const auto n = static_cast<nre::NewsId>((u % 10) * 25 + rng.uniform_index(25));
        if (std::find(liked[u].begin(), liked[u].end(), n) != liked[u].end()) continue;
        liked[u].push_back(n);
        events.push_back({u, n, 1});
    }
    for (auto& l : liked) std::sort(l.begin(), l.end());
    std::vector<nre::NewsId> active(news);
    std::iota(active.begin(), active.end(), 0u);
    nre::recsys::TrainConfig config;
    config.max_epochs = 10;
    config.embed_dim = 32;
    nre::recsys::TrainingSetOptions options;
    const auto data = nre::recsys::build_training_set(events, active, liked, options, rng);
    for (auto _ : state) {
        nre::RngStream train(5, "train");
        benchmark::DoNotOptimize(nre::recsys::train_ranking_model(data, config, train));
    }
}
BENCHMARK(BM_TrainRankingModel)->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
