#pragma once

// Seeded Monte Carlo engine: contexts are sampled per universe and time step,
// an action is selected each step by expected utility, and one record is kept
// per (replication, universe, step).

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "mpt/core_model.hpp"
#include "mpt/decision.hpp"
#include "mpt/rng.hpp"

namespace mpt {

struct UniformRange {
    double lo = 0.0;
    double hi = 1.0;

    bool operator==(const UniformRange&) const = default;
};

struct SamplingSpec {
    UniformRange rho{0.0, 1.0};
    UniformRange s{0.5, 1.0};
    UniformRange r{0.0, 1.0};
    UniformRange trust{0.0, 1.0};
    UniformRange d{0.2, 0.9};

    // Requires 0 <= lo <= hi <= 1 for every range.
    void validate() const;

    bool operator==(const SamplingSpec&) const = default;
};

struct SimulationConfig {
    std::size_t n_universes = 5;
    std::size_t horizon = 10;
    Weights weights;
    SamplingSpec sampling;
    ActionSet actions;
    ProbabilityMode probability_mode;
    std::uint64_t master_seed = 0;
    std::size_t n_replications = 1;

    void validate() const;

    bool operator==(const SimulationConfig&) const = default;
};

enum class RiskBand { low, moderate, high };

inline constexpr std::array<RiskBand, 3> kRiskBands{RiskBand::low, RiskBand::moderate,
                                                    RiskBand::high};

std::string_view to_string(RiskBand band);
std::optional<RiskBand> parse_risk_band(std::string_view text);

/// Tertiles of [0, 1]: low below 1/3, high from 2/3 up. Throws ValidationError
/// for r outside [0, 1].
RiskBand classify_risk_band(double r);

struct TrajectoryRecord {
    std::size_t replication = 0;
    std::size_t universe_id = 0;
    std::size_t t = 0;  // 0-based
    ContextSample context;  // post-action
    unsigned action_id = 0;
    double utility_total = 0.0;
    double ci = 0.0;
    RiskBand risk_band = RiskBand::low;

    bool operator==(const TrajectoryRecord&) const = default;
};

/// Draws (rho, s, r, trust, d) in that order, five draws per call.
ContextSample sample_context(RngStream& stream, const SamplingSpec& spec);

/// Records ordered by (replication, universe, t); size is
/// n_replications * n_universes * horizon.
std::vector<TrajectoryRecord> run_simulation(const SimulationConfig& cfg);

/// Records of a single replication, in (universe, t) order. Replications are
/// independent, so callers may run them concurrently.
std::vector<TrajectoryRecord> run_replication(const SimulationConfig& cfg,
                                              std::size_t replication);

struct CellStats {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};

// Empty cells are nullopt, never zero.
using CellSeries = std::vector<std::optional<CellStats>>;

struct BandSummary {
    std::size_t horizon = 0;
    std::array<CellSeries, 3> by_band;     // indexed by RiskBand, then t
    std::vector<CellSeries> by_universe;  // indexed by universe, then t

    const CellSeries& band(RiskBand b) const { return by_band[static_cast<std::size_t>(b)]; }
};

/// Utility statistics per risk band and per universe at each time step.
/// Throws ValidationError on an empty record list.
BandSummary band_summary(std::span<const TrajectoryRecord> records);

}  // namespace mpt
