#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nre/datagen/population.hpp"
#include "nre/embeddings/embedding_table.hpp"
#include "nre/engine/config.hpp"
#include "nre/engine/state.hpp"

namespace nre::engine {

struct GeneratedPopulation {
    datagen::SyntheticPopulation population;
    std::optional<embeddings::EmbeddingTable> word_table;
    std::vector<std::string> wordbase_tokens;
};

/// Dataset-free population: a synthetic mixture space sampled with the
/// configured sizes and hyper-parameter distributions.
GeneratedPopulation generate_bootstrap_population(const SimConfig& config);

/// Round 0: initial creator pools, uniformly random lists, first responses.
/// Throws ValidationError when the population size disagrees with `config`.
SimState initialize_simulation(const datagen::SyntheticPopulation& population, const SimConfig& config,
                               RoundTrace* trace = nullptr);

/// Advances `state` by one round and appends its report.
const metrics::RoundReport& run_round(SimState& state, const SimConfig& config, RoundTrace* trace = nullptr);

struct RunOptions {
    /// Metrics, projections, explanations and snapshots land here when set.
    std::optional<std::filesystem::path> out_dir;
    /// Bootstrap population when null.
    const datagen::SyntheticPopulation* population = nullptr;
    /// Explanations are exported only with a wordbase.
    const embeddings::Wordbase* wordbase = nullptr;
    std::function<void(const metrics::RoundReport&)> on_round;
    std::function<void(const SimState&, const RoundTrace&)> on_trace;
};

struct SimulationResult {
    SimState state;
    std::vector<metrics::RoundReport> reports;
};

SimulationResult run_simulation(const SimConfig& config, const RunOptions& options = {});

/// Continues a restored state up to config.rounds. Exports rewrite the
/// metrics file from the restored reports first.
SimulationResult resume_simulation(SimState state, const SimConfig& config, const RunOptions& options = {});

}  // namespace nre::engine
