#include "mpt/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "mpt/config.hpp"
#include "mpt/decision.hpp"
#include "mpt/error.hpp"
#include "mpt/records_io.hpp"
#include "text_util.hpp"

namespace mpt::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
    f << content;
    f.flush();
    if (!f) throw IoError("failed writing '" + path.string() + "'");
}

std::string read_file(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

json range_json(const UniformRange& r) { return json::array({r.lo, r.hi}); }

json config_json(const SimulationConfig& cfg) {
    const auto& w = cfg.weights;
    json actions = json::array();
    for (const auto& a : cfg.actions.actions()) {
        actions.push_back({{"id", a.id},
                           {"label", a.label},
                           {"delta_r", a.effect.delta_r},
                           {"delta_s", a.effect.delta_s},
                           {"delta_trust", a.effect.delta_trust}});
    }
    json run{{"n_universes", cfg.n_universes},
             {"horizon", cfg.horizon},
             {"n_replications", cfg.n_replications},
             {"master_seed", cfg.master_seed}};
    if (cfg.probability_mode.kind == ProbabilityMode::Kind::weighted) {
        run["probability_mode"] = "weighted";
        run["probability_weights"] = cfg.probability_mode.weights;
    } else {
        run["probability_mode"] = "uniform";
    }
    return {
        {"weights",
         {{"alpha", w.alpha()},
          {"beta", w.beta()},
          {"gamma", w.gamma()},
          {"delta", w.delta()},
          {"zeta", w.zeta()},
          {"theta", w.theta()},
          {"lambda_discount", w.lambda_discount()}}},
        {"sampling",
         {{"rho_range", range_json(cfg.sampling.rho)},
          {"s_range", range_json(cfg.sampling.s)},
          {"r_range", range_json(cfg.sampling.r)},
          {"trust_range", range_json(cfg.sampling.trust)},
          {"d_range", range_json(cfg.sampling.d)}}},
        {"actions", actions},
        {"run", run},
    };
}

json manifest_json(const std::string& command, const json& inputs, const json& outputs) {
    return {{"tool", kToolName}, {"version", kVersion}, {"command", command},
            {"inputs", inputs},  {"outputs", outputs}};
}

struct SeedChoice {
    std::uint64_t seed;
    std::string source;
};

SeedChoice choose_seed(const LoadedConfig& loaded, const std::optional<std::uint64_t>& flag,
                       std::ostream& out) {
    if (flag) return {*flag, "flag"};
    if (loaded.seed_specified) return {loaded.config.master_seed, "config"};
    std::random_device rd;
    const std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    out << "generated master seed: " << seed << "\n";
    return {seed, "generated"};
}

// Table-style display: 4 decimals, scientific below 1e-3.
std::string display_p(double p) {
    char buf[32];
    if (p != 0.0 && p < 1e-3) {
        std::snprintf(buf, sizeof buf, "%.3e", p);
    } else {
        std::snprintf(buf, sizeof buf, "%.4f", p);
    }
    return buf;
}

std::string display_4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

json hypothesis_json(const HypothesisResult& h) {
    json j{{"name", h.name}, {"pair", h.pair}};
    if (h.inference) {
        j["r"] = h.inference->r;
        j["p_value"] = h.inference->p_value;
        j["ci_low"] = h.inference->ci_low;
        j["ci_high"] = h.inference->ci_high;
    } else {
        j["r"] = nullptr;
        j["p_value"] = nullptr;
        j["ci_low"] = nullptr;
        j["ci_high"] = nullptr;
    }
    j["n"] = h.n;
    j["significant_05"] = h.inference && h.inference->significant_05;
    j["status"] = h.status;
    return j;
}

void print_hypothesis_table(std::ostream& out, const std::vector<HypothesisResult>& results) {
    out << std::left << std::setw(4) << "" << std::setw(32) << "pair" << std::setw(10) << "r"
        << std::setw(12) << "p-value"
        << "95% CI\n";
    for (const auto& h : results) {
        out << std::setw(4) << h.name << std::setw(32) << h.pair;
        if (h.inference) {
            const auto& i = *h.inference;
            out << std::setw(10) << display_4(i.r) << std::setw(12) << display_p(i.p_value) << "["
                << display_4(i.ci_low) << ", " << display_4(i.ci_high) << "]"
                << (i.significant_05 ? " *" : "");
        } else {
            out << h.status;
        }
        out << "\n";
    }
}

ContextSample context_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("each universe must be a JSON object");
    const auto field = [&](const char* name) {
        if (!j.contains(name) || !j.at(name).is_number()) {
            throw ValidationError(std::string("universe is missing numeric field '") + name + "'");
        }
        return j.at(name).get<double>();
    };
    ContextSample c{field("rho"), field("s"), field("r"), field("trust"), field("d_sens")};
    validate_context(c);
    return c;
}

std::vector<ContextSample> universes_from_json(const json& j) {
    if (!j.is_array() || j.empty()) {
        throw ValidationError("universe list must be a non-empty array");
    }
    std::vector<ContextSample> out;
    for (const auto& u : j) out.push_back(context_from_json(u));
    return out;
}

ActionSet actions_from_json(const json& j) {
    if (!j.is_array()) throw ValidationError("'actions' must be an array");
    std::vector<Action> actions;
    for (const auto& a : j) {
        if (!a.is_object() || !a.contains("id") || !a.at("id").is_number_unsigned()) {
            throw ValidationError("each action needs a nonnegative integer 'id'");
        }
        Action act;
        act.id = a.at("id").get<unsigned>();
        act.label = a.value("label", "action" + std::to_string(act.id));
        act.effect.delta_r = a.value("delta_r", 0.0);
        act.effect.delta_s = a.value("delta_s", 0.0);
        act.effect.delta_trust = a.value("delta_trust", 0.0);
        actions.push_back(std::move(act));
    }
    return ActionSet(std::move(actions));
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const CsvSchemaError& e) {
        err << "error: input does not match the trajectory schema: " << e.what() << "\n";
        return kValidation;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIo;
    } catch (const nlohmann::json::exception& e) {
        err << "error: malformed JSON: " << e.what() << "\n";
        return kValidation;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    }
}

}  // namespace

fs::path sibling_path(const fs::path& primary, const std::string& suffix) {
    fs::path p = primary;
    p.replace_extension();
    p += suffix;
    return p;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw ValidationError("quantile of an empty sample");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

ReplicationReport replicate_hypotheses(const SimulationConfig& cfg, std::uint64_t base_seed,
                                       std::size_t n_seeds) {
    if (n_seeds == 0) throw ValidationError("number of seeds must be at least 1");
    ReplicationReport report;
    report.runs.reserve(n_seeds);
    SimulationConfig run_cfg = cfg;
    for (std::size_t k = 0; k < n_seeds; ++k) {
        run_cfg.master_seed = base_seed + k;
        const auto records = run_simulation(run_cfg);
        report.runs.push_back({run_cfg.master_seed, run_hypotheses(records)});
    }

    const auto& specs = replication_hypotheses();
    for (std::size_t h = 0; h < specs.size(); ++h) {
        std::vector<double> rs;
        std::size_t significant = 0;
        for (const auto& run : report.runs) {
            const auto& inf = run.results[h].inference;
            if (!inf) continue;
            rs.push_back(inf->r);
            if (inf->significant_05) ++significant;
        }
        QuantileRow row;
        row.hypothesis = specs[h].name;
        row.n_valid = rs.size();
        if (!rs.empty()) {
            std::sort(rs.begin(), rs.end());
            row.q025 = quantile_sorted(rs, 0.025);
            row.q50 = quantile_sorted(rs, 0.5);
            row.q975 = quantile_sorted(rs, 0.975);
        } else {
            row.q025 = row.q50 = row.q975 = std::nan("");
        }
        row.frac_significant_05 =
            static_cast<double>(significant) / static_cast<double>(report.runs.size());
        report.quantiles.push_back(row);
    }
    return report;
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const LoadedConfig loaded = load_config(opts.config);
        SimulationConfig cfg = loaded.config;
        const SeedChoice seed = choose_seed(loaded, opts.seed, out);
        cfg.master_seed = seed.seed;
        const auto records = run_simulation(cfg);

        std::ostringstream csv;
        write_records_csv(csv, records);
        const fs::path manifest_path = sibling_path(opts.out, ".manifest.json");
        json manifest = manifest_json("simulate", {{"config", opts.config.string()}},
                                      {opts.out.string(), manifest_path.string()});
        manifest["master_seed"] = seed.seed;
        manifest["seed_source"] = seed.source;
        manifest["config"] = config_json(cfg);
        manifest["record_count"] = records.size();

        write_file(opts.out, csv.str());
        write_file(manifest_path, manifest.dump(2) + "\n");
        out << "wrote " << records.size() << " records to " << opts.out.string() << "\n";
        return int{kOk};
    });
}

int cmd_analyze(const AnalyzeOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        std::istringstream in(read_file(opts.in));
        const auto records = read_records_csv(in);
        if (records.empty()) throw ValidationError("input contains no data rows");
        const auto results = run_hypotheses(records);
        const auto summary = band_summary(records);

        json report = json::array();
        for (const auto& h : results) report.push_back(hypothesis_json(h));
        std::ostringstream bands;
        write_band_summary_csv(bands, summary);
        std::ostringstream universes;
        write_universe_summary_csv(universes, summary);

        const fs::path bands_path = sibling_path(opts.out, ".bands.csv");
        const fs::path universes_path = sibling_path(opts.out, ".universes.csv");
        const fs::path manifest_path = sibling_path(opts.out, ".manifest.json");
        json manifest = manifest_json(
            "analyze", {{"in", opts.in.string()}},
            {opts.out.string(), bands_path.string(), universes_path.string(),
             manifest_path.string()});
        manifest["record_count"] = records.size();

        write_file(opts.out, report.dump(2) + "\n");
        write_file(bands_path, bands.str());
        write_file(universes_path, universes.str());
        write_file(manifest_path, manifest.dump(2) + "\n");
        print_hypothesis_table(out, results);
        return int{kOk};
    });
}

int cmd_replicate(const ReplicateOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (opts.seeds == 0) throw ValidationError("--seeds must be at least 1");
        const LoadedConfig loaded = load_config(opts.config);
        const SeedChoice seed = choose_seed(loaded, opts.seed, out);
        SimulationConfig cfg = loaded.config;
        cfg.master_seed = seed.seed;
        const auto report = replicate_hypotheses(cfg, seed.seed, opts.seeds);

        using detail::format_double;
        std::ostringstream rows;
        rows << "seed,hypothesis,r,p_value,significant_05\n";
        for (const auto& run : report.runs) {
            for (const auto& h : run.results) {
                rows << run.seed << ',' << h.name << ',';
                if (h.inference) {
                    rows << format_double(h.inference->r) << ','
                         << format_double(h.inference->p_value) << ','
                         << (h.inference->significant_05 ? 1 : 0);
                } else {
                    rows << ",,0";
                }
                rows << '\n';
            }
        }
        std::ostringstream quant;
        quant << "hypothesis,n_valid,q025,q50,q975,frac_significant_05\n";
        for (const auto& q : report.quantiles) {
            quant << q.hypothesis << ',' << q.n_valid << ',';
            if (q.n_valid > 0) {
                quant << format_double(q.q025) << ',' << format_double(q.q50) << ','
                      << format_double(q.q975);
            } else {
                quant << ",,";
            }
            quant << ',' << format_double(q.frac_significant_05) << '\n';
        }

        const fs::path quant_path = sibling_path(opts.out, ".quantiles.csv");
        const fs::path manifest_path = sibling_path(opts.out, ".manifest.json");
        json manifest =
            manifest_json("replicate", {{"config", opts.config.string()}},
                          {opts.out.string(), quant_path.string(), manifest_path.string()});
        manifest["master_seed"] = seed.seed;
        manifest["seed_source"] = seed.source;
        manifest["n_seeds"] = opts.seeds;
        manifest["seeds"] = {seed.seed, seed.seed + (opts.seeds - 1)};
        manifest["config"] = config_json(cfg);
        manifest["record_count"] = report.runs.size() * cfg.n_replications * cfg.n_universes *
                                   cfg.horizon;

        write_file(opts.out, rows.str());
        write_file(quant_path, quant.str());
        write_file(manifest_path, manifest.dump(2) + "\n");

        out << std::left << std::setw(4) << "" << std::setw(10) << "q2.5" << std::setw(10)
            << "median" << std::setw(10) << "q97.5"
            << "significant\n";
        for (const auto& q : report.quantiles) {
            out << std::setw(4) << q.hypothesis;
            if (q.n_valid > 0) {
                out << std::setw(10) << display_4(q.q025) << std::setw(10) << display_4(q.q50)
                    << std::setw(10) << display_4(q.q975);
            } else {
                out << std::setw(30) << "degenerate";
            }
            out << display_4(q.frac_significant_05) << "\n";
        }
        return int{kOk};
    });
}

int cmd_decide(const DecideOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const SimulationConfig cfg = load_config(opts.config).config;
        const json state = json::parse(read_file(opts.state));
        if (!state.is_object()) throw ValidationError("state must be a JSON object");

        std::vector<std::vector<ContextSample>> steps;
        if (state.contains("steps")) {
            const auto& s = state.at("steps");
            if (!s.is_array() || s.empty()) {
                throw ValidationError("'steps' must be a non-empty array");
            }
            for (const auto& step : s) steps.push_back(universes_from_json(step));
        } else if (state.contains("universes")) {
            steps.push_back(universes_from_json(state.at("universes")));
        } else {
            throw ValidationError("state needs 'universes' or 'steps'");
        }
        const ActionSet actions =
            state.contains("actions") ? actions_from_json(state.at("actions")) : cfg.actions;

        std::vector<double> per_step_eu;
        json step_reports = json::array();
        for (std::size_t t = 0; t < steps.size(); ++t) {
            const auto& universes = steps[t];
            std::vector<double> probs;
            if (state.contains("probabilities")) {
                probs = universe_probabilities(
                    universes.size(),
                    ProbabilityMode::weighted(state.at("probabilities").get<std::vector<double>>()));
            } else {
                probs = universe_probabilities(universes.size(), cfg.probability_mode);
            }
            json eus = json::array();
            for (const auto& a : actions.actions()) {
                eus.push_back({{"id", a.id},
                               {"label", a.label},
                               {"expected_utility",
                                expected_utility(cfg.weights, a, universes, probs)}});
            }
            const ActionChoice choice = select_action(cfg.weights, actions, universes, probs);
            per_step_eu.push_back(choice.expected_utility);
            step_reports.push_back({{"t", t + 1},
                                    {"chosen_action", choice.action.id},
                                    {"chosen_label", choice.action.label},
                                    {"expected_utility", choice.expected_utility},
                                    {"expected_utilities", eus}});
        }
        const ValueEstimate value = value_recursive(cfg.weights, per_step_eu);

        json result{{"chosen_action", step_reports[0]["chosen_action"]},
                    {"chosen_label", step_reports[0]["chosen_label"]},
                    {"expected_utilities", step_reports[0]["expected_utilities"]},
                    {"lambda_discount", cfg.weights.lambda_discount()},
                    {"per_step_expected_utility", value.per_step_expected_utility},
                    {"discounted_value", value.discounted_value},
                    {"steps", step_reports}};
        out << result.dump(2) << "\n";
        return int{kOk};
    });
}

int cmd_oracle(const OracleOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const SimulationConfig cfg = load_config(opts.config).config;
        if (!cfg.actions.all_zero_effect()) {
            throw ValidationError(
                "analytic correlations assume actions leave the context unchanged; "
                "this config has actions with nonzero effects");
        }
        if (cfg.weights.theta() != 0.0) {
            throw ValidationError(
                "analytic correlations assume theta = 0; the CI term makes utility nonlinear");
        }
        json table;
        for (Variable v :
             {Variable::rho, Variable::s, Variable::r, Variable::trust, Variable::d_sens}) {
            table[std::string(to_string(v))] = analytic_r(v, cfg.weights, cfg.sampling);
        }
        out << table.dump(2) << "\n";
        return int{kOk};
    });
}

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multiverse privacy simulation and hypothesis toolkit", kToolName};
    app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
    app.require_subcommand(1);

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "Run the Monte Carlo study, write trajectories CSV");
    simulate->add_option("--config", sim.config, "Config file")->required();
    simulate->add_option("--seed", sim.seed, "Master seed (overrides the config)");
    simulate->add_option("--out", sim.out, "Output CSV")->required();

    AnalyzeOptions an;
    auto* analyze = app.add_subcommand("analyze", "Hypothesis tests and risk-band summary of a trajectories CSV");
    analyze->add_option("--in", an.in, "Trajectories CSV")->required();
    analyze->add_option("--out", an.out, "Output JSON report")->required();

    ReplicateOptions rep;
    auto* replicate = app.add_subcommand("replicate", "Repeat the study over many seeds");
    replicate->add_option("--config", rep.config, "Config file")->required();
    replicate->add_option("--seeds", rep.seeds, "Number of seeds")->required();
    replicate->add_option("--seed", rep.seed, "First seed (overrides the config)");
    replicate->add_option("--out", rep.out, "Per-seed results CSV")->required();

    DecideOptions dec;
    auto* decide = app.add_subcommand("decide", "Select the expected-utility maximizing action");
    decide->add_option("--config", dec.config, "Config file")->required();
    decide->add_option("--state", dec.state, "State JSON with universes and actions")->required();

    OracleOptions orc;
    auto* oracle = app.add_subcommand("oracle", "Closed-form input/utility correlations");
    oracle->add_option("--config", orc.config, "Config file")->required();

    std::vector<const char*> cargv;
    cargv.reserve(argv.size());
    for (const auto& a : argv) cargv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? int{kOk} : int{kValidation};
    }

    if (simulate->parsed()) return cmd_simulate(sim, out, err);
    if (analyze->parsed()) return cmd_analyze(an, out, err);
    if (replicate->parsed()) return cmd_replicate(rep, out, err);
    if (decide->parsed()) return cmd_decide(dec, out, err);
    return cmd_oracle(orc, out, err);
}

}  // namespace mpt::cli
