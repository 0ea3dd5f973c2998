#pragma once

// Command-line front end. Every command is also callable in-process; exit
// codes are 0 on success, 1 for validation or usage errors and 2 for I/O
// errors.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mpt/simulation.hpp"
#include "mpt/stats.hpp"

namespace mpt::cli {

inline constexpr const char* kToolName = "mpt";
inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kValidation = 1, kIo = 2 };

/// `argv[0]` is the program name.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

struct SimulateOptions {
    std::filesystem::path config;
    std::optional<std::uint64_t> seed;
    std::filesystem::path out;
};

struct AnalyzeOptions {
    std::filesystem::path in;
    std::filesystem::path out;
};

struct ReplicateOptions {
    std::filesystem::path config;
    std::size_t seeds = 1;
    std::optional<std::uint64_t> seed;
    std::filesystem::path out;
};

struct DecideOptions {
    std::filesystem::path config;
    std::filesystem::path state;
};

struct OracleOptions {
    std::filesystem::path config;
};

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_analyze(const AnalyzeOptions& opts, std::ostream& out, std::ostream& err);
int cmd_replicate(const ReplicateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_decide(const DecideOptions& opts, std::ostream& out, std::ostream& err);
int cmd_oracle(const OracleOptions& opts, std::ostream& out, std::ostream& err);

/// Sibling output path: `dir/run.csv` with suffix ".manifest.json" becomes
/// `dir/run.manifest.json`.
std::filesystem::path sibling_path(const std::filesystem::path& primary, const std::string& suffix);

struct SeedRun {
    std::uint64_t seed = 0;
    std::vector<HypothesisResult> results;
};

struct QuantileRow {
    std::string hypothesis;
    std::size_t n_valid = 0;  // seeds with a defined correlation
    double q025 = 0.0;
    double q50 = 0.0;
    double q975 = 0.0;
    double frac_significant_05 = 0.0;
};

struct ReplicationReport {
    std::vector<SeedRun> runs;
    std::vector<QuantileRow> quantiles;  // hypothesis order
};

/// Runs the simulation once per seed `base_seed + k`, k < n_seeds, and tests
/// the hypotheses on each run.
ReplicationReport replicate_hypotheses(const SimulationConfig& cfg, std::uint64_t base_seed,
                                       std::size_t n_seeds);

/// Linear interpolation between order statistics (R type 7). `sorted` must be
/// ascending and non-empty.
double quantile_sorted(const std::vector<double>& sorted, double q);

}  // namespace mpt::cli
