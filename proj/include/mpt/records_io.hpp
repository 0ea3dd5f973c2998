#pragma once

// CSV serialization of trajectories and their summaries. Reals are written
// with 17 significant digits so a write/read cycle reproduces every record
// bit for bit. Time steps are 1-based on disk.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mpt/error.hpp"
#include "mpt/simulation.hpp"

namespace mpt {

inline constexpr const char* kTrajectoryHeader =
    "replication,universe,t,rho,s,r,trust,d,action,utility,ci_score,risk_band";

/// Input does not carry the trajectory columns.
class CsvSchemaError : public ValidationError {
public:
    CsvSchemaError(const std::string& msg, std::vector<std::string> missing)
        : ValidationError(msg), missing_(std::move(missing)) {}

    const std::vector<std::string>& missing_columns() const { return missing_; }

private:
    std::vector<std::string> missing_;
};

void write_records_csv(std::ostream& out, std::span<const TrajectoryRecord> records);

/// Columns are matched by header name. Throws CsvSchemaError for missing
/// columns and ValidationError (with the line number) for malformed rows.
std::vector<TrajectoryRecord> read_records_csv(std::istream& in);

/// `band,t,mean_utility,count`: every band for every step, empty mean when a
/// cell has no records.
void write_band_summary_csv(std::ostream& out, const BandSummary& summary);

/// `universe,t,mean_utility,min_utility,max_utility,count`.
void write_universe_summary_csv(std::ostream& out, const BandSummary& summary);

}  // namespace mpt
