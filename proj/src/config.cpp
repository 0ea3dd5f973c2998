#include "mpt/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "text_util.hpp"

namespace mpt {

namespace {

using detail::parse_double;
using detail::parse_u64;
using detail::split;
using detail::trim;

struct Entry {
    std::string section;
    std::string key;
    std::string value;
    int line = 0;
};

class Parser {
public:
    explicit Parser(std::string_view source) : source_(source) {}

    [[noreturn]] void fail(const Entry& e, const std::string& msg) const {
        fail_at(e.line, "[" + e.section + "]." + e.key + ": " + msg);
    }

    [[noreturn]] void fail_at(int line, const std::string& msg) const {
        std::ostringstream os;
        os << source_ << ":" << line << ": " << msg;
        throw ConfigError(os.str());
    }

    double real(const Entry& e) const {
        const auto v = parse_double(e.value);
        if (!v || !std::isfinite(*v)) fail(e, "expected a finite number, got '" + e.value + "'");
        return *v;
    }

    std::size_t positive_count(const Entry& e) const {
        const auto v = parse_u64(e.value);
        if (!v) fail(e, "expected a nonnegative integer, got '" + e.value + "'");
        if (*v == 0) fail(e, "must be at least 1");
        return static_cast<std::size_t>(*v);
    }

    UniformRange range(const Entry& e) const {
        const auto parts = split(e.value, ',');
        if (parts.size() != 2) fail(e, "expected 'lo, hi'");
        const auto lo = parse_double(parts[0]);
        const auto hi = parse_double(parts[1]);
        if (!lo || !hi) fail(e, "expected two numbers 'lo, hi'");
        if (!(*lo >= 0.0 && *lo <= *hi && *hi <= 1.0)) {
            fail(e, "range must satisfy 0 <= lo <= hi <= 1");
        }
        return {*lo, *hi};
    }

    Action action(const Entry& e) const {
        const auto parts = split(e.value, ',');
        if (parts.size() != 5) {
            fail(e, "expected 'id, label, delta_r, delta_s, delta_trust'");
        }
        const auto id = parse_u64(parts[0]);
        if (!id || *id > 0xFFFFFFFFull) fail(e, "action id must be a small nonnegative integer");
        Action a;
        a.id = static_cast<unsigned>(*id);
        a.label = std::string(trim(parts[1]));
        if (a.label.empty()) fail(e, "action label must not be empty");
        double* deltas[] = {&a.effect.delta_r, &a.effect.delta_s, &a.effect.delta_trust};
        for (int i = 0; i < 3; ++i) {
            const auto v = parse_double(parts[2 + i]);
            if (!v || !(*v >= -1.0 && *v <= 1.0)) fail(e, "action deltas must lie in [-1,1]");
            *deltas[i] = *v;
        }
        return a;
    }

    std::vector<double> list(const Entry& e) const {
        std::vector<double> out;
        for (auto part : split(e.value, ',')) {
            const auto v = parse_double(part);
            if (!v || !std::isfinite(*v) || *v < 0.0) {
                fail(e, "expected a comma-separated list of nonnegative numbers");
            }
            out.push_back(*v);
        }
        return out;
    }

private:
    std::string source_;
};

const std::map<std::string, std::vector<std::string>, std::less<>>& schema() {
    static const std::map<std::string, std::vector<std::string>, std::less<>> keys{
        {"weights", {"alpha", "beta", "gamma", "delta", "zeta", "theta", "lambda_discount"}},
        {"sampling", {"rho_range", "s_range", "r_range", "trust_range", "d_range"}},
        {"actions", {"action"}},
        {"run",
         {"n_universes", "horizon", "n_replications", "master_seed", "probability_mode",
          "probability_weights"}},
    };
    return keys;
}

bool known_key(std::string_view section, std::string_view key) {
    const auto it = schema().find(section);
    if (it == schema().end()) return false;
    for (const auto& k : it->second) {
        if (k == key) return true;
    }
    return false;
}

std::string format_range(const UniformRange& r) {
    return detail::format_double(r.lo) + ", " + detail::format_double(r.hi);
}

}  // namespace

LoadedConfig parse_config(std::string_view text, std::string_view source) {
    Parser parser(source);
    std::vector<Entry> entries;
    std::map<std::string, int> seen;  // "section.key" -> line
    std::string section;

    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') parser.fail_at(line_no, "malformed section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!schema().contains(section)) {
                parser.fail_at(line_no, "unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) parser.fail_at(line_no, "expected 'key = value'");
        Entry e{section, std::string(trim(line.substr(0, eq))),
                std::string(trim(line.substr(eq + 1))), line_no};
        if (section.empty()) parser.fail_at(line_no, "key '" + e.key + "' outside any section");
        if (!known_key(section, e.key)) parser.fail(e, "unknown key");
        if (e.key != "action") {
            const auto [it, inserted] = seen.emplace(section + "." + e.key, line_no);
            if (!inserted) {
                parser.fail(e, "duplicate key (first set on line " + std::to_string(it->second) +
                                   ")");
            }
        }
        entries.push_back(std::move(e));
    }

    LoadedConfig loaded;
    SimulationConfig& cfg = loaded.config;
    const Weights defaults;
    double alpha = defaults.alpha(), beta = defaults.beta(), gamma = defaults.gamma(),
           delta = defaults.delta(), zeta = defaults.zeta(), theta = defaults.theta(),
           lambda = defaults.lambda_discount();
    std::vector<Action> actions;
    std::string mode = "uniform";
    const Entry* mode_entry = nullptr;
    const Entry* weights_entry = nullptr;
    std::vector<double> prob_weights;

    for (const auto& e : entries) {
        if (e.section == "weights") {
            const double v = parser.real(e);
            if (e.key == "alpha") alpha = v;
            else if (e.key == "beta") beta = v;
            else if (e.key == "gamma") gamma = std::fabs(v);
            else if (e.key == "delta") delta = v;
            else if (e.key == "zeta") zeta = v;
            else if (e.key == "theta") theta = v;
            else {
                if (!(v >= 0.0 && v <= 1.0)) parser.fail(e, "must lie in [0,1]");
                lambda = v;
            }
        } else if (e.section == "sampling") {
            const auto r = parser.range(e);
            if (e.key == "rho_range") cfg.sampling.rho = r;
            else if (e.key == "s_range") cfg.sampling.s = r;
            else if (e.key == "r_range") cfg.sampling.r = r;
            else if (e.key == "trust_range") cfg.sampling.trust = r;
            else cfg.sampling.d = r;
        } else if (e.section == "actions") {
            actions.push_back(parser.action(e));
            for (std::size_t i = 0; i + 1 < actions.size(); ++i) {
                if (actions[i].id == actions.back().id) parser.fail(e, "duplicate action id");
            }
        } else {
            if (e.key == "n_universes") cfg.n_universes = parser.positive_count(e);
            else if (e.key == "horizon") cfg.horizon = parser.positive_count(e);
            else if (e.key == "n_replications") cfg.n_replications = parser.positive_count(e);
            else if (e.key == "master_seed") {
                const auto v = parse_u64(e.value);
                if (!v) parser.fail(e, "expected an unsigned 64-bit integer");
                cfg.master_seed = *v;
                loaded.seed_specified = true;
            } else if (e.key == "probability_mode") {
                if (e.value != "uniform" && e.value != "weighted") {
                    parser.fail(e, "expected 'uniform' or 'weighted'");
                }
                mode = e.value;
                mode_entry = &e;
            } else {
                prob_weights = parser.list(e);
                weights_entry = &e;
            }
        }
    }

    cfg.weights = Weights(alpha, beta, gamma, delta, zeta, theta, lambda);
    if (!actions.empty()) cfg.actions = ActionSet(std::move(actions));

    if (mode == "weighted") {
        if (!weights_entry) parser.fail(*mode_entry, "weighted mode needs probability_weights");
        cfg.probability_mode = ProbabilityMode::weighted(prob_weights);
        try {
            universe_probabilities(cfg.n_universes, cfg.probability_mode);
        } catch (const ValidationError& err) {
            parser.fail(*weights_entry, err.what());
        }
    } else if (weights_entry) {
        parser.fail(*weights_entry, "only valid with probability_mode = weighted");
    }
    cfg.validate();
    return loaded;
}

LoadedConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string());
}

std::string format_config(const SimulationConfig& cfg) {
    using detail::format_double;
    std::ostringstream os;
    const auto& w = cfg.weights;
    os << "[weights]\n"
       << "alpha = " << format_double(w.alpha()) << "\n"
       << "beta = " << format_double(w.beta()) << "\n"
       << "gamma = " << format_double(w.gamma()) << "\n"
       << "delta = " << format_double(w.delta()) << "\n"
       << "zeta = " << format_double(w.zeta()) << "\n"
       << "theta = " << format_double(w.theta()) << "\n"
       << "lambda_discount = " << format_double(w.lambda_discount()) << "\n\n";
    os << "[sampling]\n"
       << "rho_range = " << format_range(cfg.sampling.rho) << "\n"
       << "s_range = " << format_range(cfg.sampling.s) << "\n"
       << "r_range = " << format_range(cfg.sampling.r) << "\n"
       << "trust_range = " << format_range(cfg.sampling.trust) << "\n"
       << "d_range = " << format_range(cfg.sampling.d) << "\n\n";
    os << "[actions]\n";
    for (const auto& a : cfg.actions.actions()) {
        os << "action = " << a.id << ", " << a.label << ", " << format_double(a.effect.delta_r)
           << ", " << format_double(a.effect.delta_s) << ", "
           << format_double(a.effect.delta_trust) << "\n";
    }
    os << "\n[run]\n"
       << "n_universes = " << cfg.n_universes << "\n"
       << "horizon = " << cfg.horizon << "\n"
       << "n_replications = " << cfg.n_replications << "\n"
       << "master_seed = " << cfg.master_seed << "\n";
    if (cfg.probability_mode.kind == ProbabilityMode::Kind::weighted) {
        os << "probability_mode = weighted\nprobability_weights = ";
        for (std::size_t i = 0; i < cfg.probability_mode.weights.size(); ++i) {
            if (i) os << ", ";
            os << format_double(cfg.probability_mode.weights[i]);
        }
        os << "\n";
    } else {
        os << "probability_mode = uniform\n";
    }
    return os.str();
}

}  // namespace mpt
