#include "mpt/simulation.hpp"

#include <algorithm>
#include <string>

#include "mpt/error.hpp"

namespace mpt {

namespace {

void check_range(const UniformRange& range, const char* name) {
    if (!(range.lo >= 0.0 && range.lo <= range.hi && range.hi <= 1.0)) {
        throw ValidationError(std::string("sampling range ") + name +
                              " must satisfy 0 <= lo <= hi <= 1");
    }
}

void accumulate(std::optional<CellStats>& cell, double value) {
    if (!cell) {
        cell = CellStats{value, value, value, 1};
        return;
    }
    // running sum kept in `mean` until finalize()
    cell->mean += value;
    cell->min = std::min(cell->min, value);
    cell->max = std::max(cell->max, value);
    ++cell->count;
}

void finalize(CellSeries& series) {
    for (auto& cell : series) {
        if (cell) cell->mean /= static_cast<double>(cell->count);
    }
}

}  // namespace

void SamplingSpec::validate() const {
    check_range(rho, "rho_range");
    check_range(s, "s_range");
    check_range(r, "r_range");
    check_range(trust, "trust_range");
    check_range(d, "d_range");
}

void SimulationConfig::validate() const {
    if (n_universes == 0) throw ValidationError("n_universes must be at least 1");
    if (horizon == 0) throw ValidationError("horizon must be at least 1");
    if (n_replications == 0) throw ValidationError("n_replications must be at least 1");
    sampling.validate();
    // checks weighted-mode length and contents
    universe_probabilities(n_universes, probability_mode);
}

std::string_view to_string(RiskBand band) {
    switch (band) {
        case RiskBand::low: return "low";
        case RiskBand::moderate: return "moderate";
        case RiskBand::high: return "high";
    }
    return "unknown";
}

std::optional<RiskBand> parse_risk_band(std::string_view text) {
    for (RiskBand b : kRiskBands) {
        if (to_string(b) == text) return b;
    }
    return std::nullopt;
}

RiskBand classify_risk_band(double r) {
    if (!(r >= 0.0 && r <= 1.0)) {
        throw ValidationError("risk " + std::to_string(r) + " is outside [0,1]");
    }
    if (r < 1.0 / 3.0) return RiskBand::low;
    if (r < 2.0 / 3.0) return RiskBand::moderate;
    return RiskBand::high;
}

ContextSample sample_context(RngStream& stream, const SamplingSpec& spec) {
    ContextSample c;
    c.rho = stream.uniform(spec.rho.lo, spec.rho.hi);
    c.s = stream.uniform(spec.s.lo, spec.s.hi);
    c.r = stream.uniform(spec.r.lo, spec.r.hi);
    c.trust = stream.uniform(spec.trust.lo, spec.trust.hi);
    c.d_sens = stream.uniform(spec.d.lo, spec.d.hi);
    return c;
}

std::vector<TrajectoryRecord> run_replication(const SimulationConfig& cfg,
                                              std::size_t replication) {
    cfg.validate();
    const std::size_t n = cfg.n_universes;
    const auto probs = universe_probabilities(n, cfg.probability_mode);

    std::vector<RngStream> streams;
    streams.reserve(n);
    for (std::size_t u = 0; u < n; ++u) {
        streams.push_back(derive_stream(cfg.master_seed, replication, u));
    }

    std::vector<TrajectoryRecord> records(n * cfg.horizon);
    std::vector<ContextSample> contexts(n);
    for (std::size_t t = 0; t < cfg.horizon; ++t) {
        for (std::size_t u = 0; u < n; ++u) {
            contexts[u] = sample_context(streams[u], cfg.sampling);
        }
        const ActionChoice choice = select_action(cfg.weights, cfg.actions, contexts, probs);
        const auto outcomes = evaluate_outcomes(cfg.weights, choice.action, contexts, probs);
        for (const auto& o : outcomes) {
            TrajectoryRecord& rec = records[o.universe_id * cfg.horizon + t];
            rec.replication = replication;
            rec.universe_id = o.universe_id;
            rec.t = t;
            rec.context = o.context;
            rec.action_id = choice.action.id;
            rec.utility_total = o.utility.total;
            rec.ci = o.ci;
            rec.risk_band = classify_risk_band(o.context.r);
        }
    }
    return records;
}

std::vector<TrajectoryRecord> run_simulation(const SimulationConfig& cfg) {
    cfg.validate();
    std::vector<TrajectoryRecord> records;
    records.reserve(cfg.n_replications * cfg.n_universes * cfg.horizon);
    for (std::size_t rep = 0; rep < cfg.n_replications; ++rep) {
        auto chunk = run_replication(cfg, rep);
        records.insert(records.end(), chunk.begin(), chunk.end());
    }
    return records;
}

BandSummary band_summary(std::span<const TrajectoryRecord> records) {
    if (records.empty()) {
        throw ValidationError("band summary needs at least one record");
    }
    BandSummary summary;
    std::size_t n_universes = 0;
    for (const auto& rec : records) {
        summary.horizon = std::max(summary.horizon, rec.t + 1);
        n_universes = std::max(n_universes, rec.universe_id + 1);
    }
    for (auto& series : summary.by_band) series.resize(summary.horizon);
    summary.by_universe.assign(n_universes, CellSeries(summary.horizon));

    for (const auto& rec : records) {
        accumulate(summary.by_band[static_cast<std::size_t>(rec.risk_band)][rec.t],
                   rec.utility_total);
        accumulate(summary.by_universe[rec.universe_id][rec.t], rec.utility_total);
    }
    for (auto& series : summary.by_band) finalize(series);
    for (auto& series : summary.by_universe) finalize(series);
    return summary;
}

}  // namespace mpt
