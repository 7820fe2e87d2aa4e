#include "nresim_cli/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "nre/datagen/pipeline.hpp"
#include "nre/engine/config.hpp"
#include "nre/engine/export.hpp"
#include "nre/engine/simulation.hpp"
#include "nre/engine/snapshot.hpp"
#include "nre/error.hpp"
#include "nre/log.hpp"

namespace nre::cli {

namespace {

namespace fs = std::filesystem;
using engine::ConfigMap;
using engine::SimConfig;
using nlohmann::json;

class UsageError : public Error {
public:
    using Error::Error;
};

/// Config file plus one flag per configuration key.
struct ConfigFlags {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> values;
    std::vector<CLI::Option*> options;

    void attach(CLI::App& cmd) {
        cmd.add_option("--config", config_path, "configuration file (key = value or JSON)")->check(CLI::ExistingFile);
        const auto keys = engine::config_keys();
        values.resize(keys.size());
        for (std::size_t i = 0; i < keys.size(); ++i) {
            values[i].first = keys[i].name;
            options.push_back(cmd.add_option("--" + engine::key_to_flag(keys[i].name), values[i].second,
                                             keys[i].description + " [" + keys[i].default_value + "]")
                                  ->group("Configuration"));
        }
    }

    bool given(const std::string& key) const {
        for (std::size_t i = 0; i < values.size(); ++i)
            if (values[i].first == key) return options[i]->count() > 0;
        return false;
    }

    /// `base`, then the config file, then explicit flags.
    ConfigMap merged(ConfigMap base = {}) const {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw UsageError("cannot open config file " + config_path);
            try {
                for (auto& [k, v] : engine::parse_config_text(in)) base[k] = v;
            } catch (const ParseError& e) {
                throw UsageError(config_path + ": " + e.what());
            }
        }
        for (std::size_t i = 0; i < values.size(); ++i)
            if (options[i]->count() > 0) base[values[i].first] = values[i].second;
        return base;
    }

    SimConfig build(ConfigMap base = {}) const { return engine::build_config(merged(std::move(base))); }
};

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

std::string opt_text(const std::optional<double>& v, const char* pattern = "%.3f") {
    return v ? fmt(pattern, *v) : std::string("-");
}

std::string summary_line(const metrics::RoundReport& r, std::size_t rounds) {
    std::ostringstream line;
    line << "round " << r.round << "/" << rounds << "  likes " << r.total_likes << "  in_loop " << r.in_loop_users
         << "  gini_news " << opt_text(r.gini_news) << "  jaccard " << opt_text(r.jaccard, "%.4f") << "  pearson "
         << opt_text(r.pearson_quality_likes) << "  mrr5 " << opt_text(r.validation_mrr5);
    return line.str();
}

void write_wordbase_files(const fs::path& dir, const engine::GeneratedPopulation& generated) {
    if (!generated.word_table || generated.wordbase_tokens.empty()) return;
    embeddings::save_embedding_table(dir / "wordbase_embeddings.txt", *generated.word_table);
    std::ofstream tokens(dir / "wordbase.txt", std::ios::binary | std::ios::trunc);
    for (const auto& t : generated.wordbase_tokens) tokens << t << '\n';
}

json mixture_summary(const datagen::GmmModel& model) {
    json means = json::array();
    json variances = json::array();
    for (std::size_t t = 0; t < model.components(); ++t) {
        means.push_back(model.means[t].values());
        variances.push_back(model.variances[t].values());
    }
    return json{{"components", model.components()},
                {"dimension", model.dimension()},
                {"weights", model.weights},
                {"means", means},
                {"variances", variances}};
}

void write_json(const fs::path& path, const json& doc) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << doc.dump(1) << '\n';
}

std::vector<UserId> parse_id_list(const std::string& text) {
    std::vector<UserId> ids;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
            throw UsageError("invalid user id '" + item + "'");
        ids.push_back(static_cast<UserId>(std::stoul(item)));
    }
    return ids;
}

embeddings::Wordbase load_wordbase_inputs(const std::string& embeddings_path, const std::string& wordbase_path,
                                          std::optional<embeddings::EmbeddingTable>& table) {
    table = embeddings::load_embedding_table(embeddings_path);
    if (!wordbase_path.empty()) return embeddings::load_wordbase(wordbase_path, *table);
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < table->size(); ++i) tokens.push_back(table->token(i));
    return embeddings::Wordbase(*table, tokens);
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
    ConfigFlags flags;
    std::string embeddings, interactions, news, out;
};

int do_generate(const GenerateArgs& a, std::ostream& out, std::ostream& err) {
    const SimConfig config = a.flags.build();
    const int given = !a.embeddings.empty() + !a.interactions.empty() + !a.news.empty();
    if (given != 0 && given != 3)
        throw UsageError("real-data mode needs --embeddings, --interactions and --news together");

    const fs::path dir(a.out);
    fs::create_directories(dir);
    json summary;
    if (given == 0) {
        const auto generated = engine::generate_bootstrap_population(config);
        datagen::save_population(dir / "population.json", generated.population);
        write_wordbase_files(dir, generated);
        summary = json{{"mode", "bootstrap"},
                       {"users", generated.population.users.size()},
                       {"creators", generated.population.creators.size()},
                       {"user_mixture", mixture_summary(generated.population.user_model)},
                       {"creator_mixture", mixture_summary(generated.population.creator_model)}};
    } else {
        const auto table = embeddings::load_embedding_table(a.embeddings);
        const auto catalog = datagen::load_news_catalog(a.news);
        const auto log = datagen::load_interaction_log(a.interactions);
        datagen::DatasetPipelineConfig pc;
        pc.propensity_exponent = config.propensity_exponent;
        pc.propensity_floor = config.propensity_floor;
        pc.user_fit = config.user_fit;
        pc.em = config.em;
        pc.components = config.bootstrap.topics;
        pc.hyper = config.hyper;
        pc.user_count = config.num_users;
        pc.creator_count = config.num_creators;
        RngStream rng(config.seed, "dataset");
        const auto result = datagen::generate_from_dataset(table, catalog, log, pc, rng);
        datagen::save_population(dir / "population.json", result.population);
        const auto fit_summary = [](const datagen::GmmFit& f) {
            json s = mixture_summary(f.model);
            s["log_likelihood"] = f.log_likelihood;
            s["iterations"] = f.iterations;
            s["converged"] = f.converged;
            return s;
        };
        summary = json{{"mode", "dataset"},
                       {"users", result.population.users.size()},
                       {"creators", result.population.creators.size()},
                       {"excluded_users", result.excluded_users.size()},
                       {"out_of_vocabulary_tokens", result.out_of_vocabulary_tokens},
                       {"notes", result.notes},
                       {"user_mixture", fit_summary(result.user_mixture)},
                       {"creator_mixture", fit_summary(result.creator_mixture)}};
        for (const auto& note : result.notes) err << "note: " << note << '\n';
    }
    write_json(dir / "gmm_summary.json", summary);
    out << (dir / "population.json").string() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
    ConfigFlags flags;
    std::string population, out_dir, resume, embeddings, wordbase;
    bool quiet = false;
};

int do_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
    if (!a.wordbase.empty() && a.embeddings.empty()) throw UsageError("--wordbase needs --embeddings");
    const fs::path dir(a.out_dir);

    std::optional<engine::Snapshot> snap;
    if (!a.resume.empty()) snap = engine::load_snapshot(a.resume);

    std::optional<datagen::SyntheticPopulation> loaded;
    ConfigMap base = snap ? engine::config_to_map(snap->config) : ConfigMap{};
    if (!a.population.empty()) {
        loaded = datagen::load_population(a.population);
        if (!a.flags.given("num_users")) base["num_users"] = std::to_string(loaded->users.size());
        if (!a.flags.given("num_creators")) base["num_creators"] = std::to_string(loaded->creators.size());
    }
    const SimConfig config = a.flags.build(base);

    fs::create_directories(dir);
    std::optional<embeddings::EmbeddingTable> table;
    std::optional<embeddings::Wordbase> wordbase;
    if (!a.embeddings.empty()) wordbase.emplace(load_wordbase_inputs(a.embeddings, a.wordbase, table));

    engine::RunOptions options;
    options.out_dir = dir;
    options.on_round = [&](const metrics::RoundReport& r) {
        if (!a.quiet) err << summary_line(r, config.rounds) << std::endl;
    };

    engine::GeneratedPopulation generated;
    if (!snap && !loaded) {
        generated = engine::generate_bootstrap_population(config);
        write_wordbase_files(dir, generated);
        if (!wordbase && generated.word_table && !generated.wordbase_tokens.empty())
            wordbase.emplace(*generated.word_table, generated.wordbase_tokens);
        options.population = &generated.population;
    } else if (loaded) {
        options.population = &*loaded;
    }
    if (wordbase) options.wordbase = &*wordbase;

    const auto result = snap ? engine::resume_simulation(std::move(snap->state), config, options)
                             : engine::run_simulation(config, options);
    out << (dir / "metrics.csv").string() << '\n';
    (void)result;
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct SweepArgs {
    ConfigFlags flags;
    std::vector<std::string> strategies;
    std::size_t repeats = 1;
    std::string out_dir;
    bool quiet = false;
};

int do_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
    if (a.repeats == 0) throw UsageError("--repeats must be at least 1");
    std::vector<std::string> strategies = a.strategies;
    if (strategies.empty()) strategies = engine::strategy_names();
    for (const auto& s : strategies) engine::parse_strategy(s);

    const ConfigMap base = a.flags.merged();
    const SimConfig master = engine::build_config(base);
    const fs::path dir(a.out_dir);
    fs::create_directories(dir);

    std::ofstream merged(dir / "sweep_long.csv", std::ios::binary | std::ios::trunc);
    if (!merged) throw Error("cannot write " + (dir / "sweep_long.csv").string());
    merged << "strategy,run,round,metric,value\n";
    const auto& columns = metrics::report_columns();

    for (const auto& strategy : strategies) {
        for (std::size_t run = 0; run < a.repeats; ++run) {
            ConfigMap values = base;
            values["strategy"] = strategy;
            values["seed"] = std::to_string(master.seed + run);
            const SimConfig config = engine::build_config(values);
            engine::RunOptions options;
            options.out_dir = dir / (strategy + "_run" + std::to_string(run));
            if (!a.quiet) err << "sweep: " << strategy << " run " << run << " (seed " << config.seed << ")\n";
            const auto result = engine::run_simulation(config, options);
            for (const auto& rep : result.reports) {
                for (const auto& column : columns) {
                    if (column == "round") continue;
                    const auto v = metrics::report_value(rep, column);
                    merged << strategy << ',' << run << ',' << rep.round << ',' << column << ','
                           << (v ? fmt("%.9g", *v) : std::string()) << '\n';
                }
            }
            merged << std::flush;
        }
    }
    out << (dir / "sweep_long.csv").string() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct ExplainArgs {
    std::string snapshot, embeddings, wordbase, users, out;
    std::size_t count = 6;
    std::size_t k = 3;
};

int do_explain(const ExplainArgs& a, std::ostream& out, std::ostream&) {
    const auto snap = engine::load_snapshot(a.snapshot);
    std::optional<embeddings::EmbeddingTable> table;
    const auto wordbase = load_wordbase_inputs(a.embeddings, a.wordbase, table);
    const auto ids = a.users.empty() ? engine::sample_explained_users(snap.state.users.size(), a.count)
                                     : parse_id_list(a.users);
    for (UserId id : ids)
        if (id >= snap.state.users.size()) throw UsageError("user " + std::to_string(id) + " does not exist");
    const auto rows = engine::explain_users(snap.state, wordbase, ids, a.k);

    std::ofstream file;
    if (!a.out.empty()) {
        file.open(a.out, std::ios::binary | std::ios::trunc);
        if (!file) throw Error("cannot write " + a.out);
    }
    std::ostream& sink = a.out.empty() ? out : file;
    sink << engine::explanation_csv_header() << '\n';
    engine::write_explanation_rows(sink, rows);
    return kExitOk;
}

struct ProjectArgs {
    std::string snapshot, out;
};

int do_project(const ProjectArgs& a, std::ostream& out, std::ostream&) {
    const auto snap = engine::load_snapshot(a.snapshot);
    if (a.out.empty()) {
        const auto rows = engine::latent_projection(snap.state);
        engine::write_projection_csv(out, snap.state.round, rows);
    } else {
        engine::export_latent_projection(snap.state, a.out);
    }
    return kExitOk;
}

struct ValidateArgs {
    ConfigFlags flags;
};

int do_validate(const ValidateArgs& a, std::ostream& out, std::ostream&) {
    out << engine::render_config(a.flags.build());
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Agent-based simulator of a news recommendation ecosystem", "nresim"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "nresim 0.1.0");

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "sample a synthetic population");
    gen.flags.attach(*generate);
    generate->add_option("--embeddings", gen.embeddings, "word embedding table")->check(CLI::ExistingFile);
    generate->add_option("--interactions", gen.interactions, "interaction log CSV")->check(CLI::ExistingFile);
    generate->add_option("--news", gen.news, "news catalog CSV")->check(CLI::ExistingFile);
    generate->add_option("--out", gen.out, "output directory")->required();

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "run the round loop");
    sim.flags.attach(*simulate);
    simulate->add_option("--population", sim.population, "population file from generate")->check(CLI::ExistingFile);
    simulate->add_option("--out-dir", sim.out_dir, "output directory")->required();
    simulate->add_option("--resume", sim.resume, "continue from a snapshot")->check(CLI::ExistingFile);
    simulate->add_option("--embeddings", sim.embeddings, "embedding table for explanations")->check(CLI::ExistingFile);
    simulate->add_option("--wordbase", sim.wordbase, "token list for explanations")->check(CLI::ExistingFile);
    simulate->add_flag("--quiet", sim.quiet, "suppress per-round summaries");

    SweepArgs sw;
    auto* sweep = app.add_subcommand("sweep", "run strategies repeatedly and merge the metrics");
    sw.flags.attach(*sweep);
    sweep->add_option("--strategies", sw.strategies, "strategies to compare (default: all)")->delimiter(',');
    sweep->add_option("--repeats", sw.repeats, "runs per strategy");
    sweep->add_option("--out-dir", sw.out_dir, "output directory")->required();
    sweep->add_flag("--quiet", sw.quiet, "suppress progress");

    ExplainArgs ex;
    auto* explain = app.add_subcommand("explain", "nearest words of user latents in a snapshot");
    explain->add_option("--snapshot", ex.snapshot, "snapshot file")->required()->check(CLI::ExistingFile);
    explain->add_option("--embeddings", ex.embeddings, "embedding table")->required()->check(CLI::ExistingFile);
    explain->add_option("--wordbase", ex.wordbase, "token list (default: every table token)")
        ->check(CLI::ExistingFile);
    explain->add_option("--users", ex.users, "comma-separated user ids");
    explain->add_option("--count", ex.count, "evenly spaced users when --users is absent");
    explain->add_option("--k", ex.k, "words per user");
    explain->add_option("--out", ex.out, "output CSV (default: stdout)");

    ProjectArgs pr;
    auto* project = app.add_subcommand("project", "two-dimensional PCA of a snapshot");
    project->add_option("--snapshot", pr.snapshot, "snapshot file")->required()->check(CLI::ExistingFile);
    project->add_option("--out", pr.out, "output CSV (default: stdout)");

    ValidateArgs va;
    auto* validate = app.add_subcommand("validate-config", "print the fully resolved configuration");
    va.flags.attach(*validate);

    std::vector<const char*> argv{"nresim"};
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help(app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name());
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << "nresim 0.1.0\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\nrun with --help for usage\n";
        return kExitUsage;
    }

    set_log_sink([&err](const std::string& m) { err << m << '\n'; });
    struct SinkReset {
        ~SinkReset() { set_log_sink({}); }
    } reset;
    try {
        if (*generate) return do_generate(gen, out, err);
        if (*simulate) return do_simulate(sim, out, err);
        if (*sweep) return do_sweep(sw, out, err);
        if (*explain) return do_explain(ex, out, err);
        if (*project) return do_project(pr, out, err);
        if (*validate) return do_validate(va, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ValidationError& e) {
        err << "invalid configuration: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace nre::cli
