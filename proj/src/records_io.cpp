#include "mpt/records_io.hpp"

#include <array>
#include <istream>
#include <ostream>
#include <string_view>

#include "text_util.hpp"

namespace mpt {

namespace {

using detail::format_double;

constexpr std::array<std::string_view, 12> kColumns{
    "replication", "universe", "t",       "rho",     "s",        "r",
    "trust",       "d",        "action",  "utility", "ci_score", "risk_band"};

enum Column { kRep, kUniverse, kT, kRho, kS, kR, kTrust, kD, kAction, kUtility, kCi, kBand };

[[noreturn]] void bad_row(std::size_t line, const std::string& msg) {
    throw ValidationError("line " + std::to_string(line) + ": " + msg);
}

std::size_t index_field(std::string_view text, std::size_t line, std::string_view name) {
    const auto v = detail::parse_u64(text);
    if (!v) bad_row(line, "column '" + std::string(name) + "' is not a nonnegative integer");
    return static_cast<std::size_t>(*v);
}

double real_field(std::string_view text, std::size_t line, std::string_view name) {
    const auto v = detail::parse_double(text);
    if (!v) bad_row(line, "column '" + std::string(name) + "' is not a number");
    return *v;
}

}  // namespace

void write_records_csv(std::ostream& out, std::span<const TrajectoryRecord> records) {
    out << kTrajectoryHeader << '\n';
    for (const auto& rec : records) {
        out << rec.replication << ',' << rec.universe_id << ',' << (rec.t + 1) << ','
            << format_double(rec.context.rho) << ',' << format_double(rec.context.s) << ','
            << format_double(rec.context.r) << ',' << format_double(rec.context.trust) << ','
            << format_double(rec.context.d_sens) << ',' << rec.action_id << ','
            << format_double(rec.utility_total) << ',' << format_double(rec.ci) << ','
            << to_string(rec.risk_band) << '\n';
    }
}

std::vector<TrajectoryRecord> read_records_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw CsvSchemaError("input is empty; expected header: " + std::string(kTrajectoryHeader),
                             {kColumns.begin(), kColumns.end()});
    }
    const auto header = detail::split(detail::trim(line), ',');
    std::array<std::size_t, kColumns.size()> pos{};
    std::vector<std::string> missing;
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
        bool found = false;
        for (std::size_t h = 0; h < header.size(); ++h) {
            if (detail::trim(header[h]) == kColumns[c]) {
                pos[c] = h;
                found = true;
                break;
            }
        }
        if (!found) missing.emplace_back(kColumns[c]);
    }
    if (!missing.empty()) {
        std::string msg = "missing columns:";
        for (const auto& m : missing) msg += " " + m;
        throw CsvSchemaError(msg, missing);
    }

    std::vector<TrajectoryRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = detail::trim(line);
        if (body.empty()) continue;
        const auto fields = detail::split(body, ',');
        if (fields.size() != header.size()) {
            bad_row(line_no, "expected " + std::to_string(header.size()) + " fields, got " +
                                 std::to_string(fields.size()));
        }
        const auto field = [&](Column c) { return detail::trim(fields[pos[c]]); };

        TrajectoryRecord rec;
        rec.replication = index_field(field(kRep), line_no, "replication");
        rec.universe_id = index_field(field(kUniverse), line_no, "universe");
        const std::size_t t = index_field(field(kT), line_no, "t");
        if (t == 0) bad_row(line_no, "time steps are 1-based");
        rec.t = t - 1;
        rec.context.rho = real_field(field(kRho), line_no, "rho");
        rec.context.s = real_field(field(kS), line_no, "s");
        rec.context.r = real_field(field(kR), line_no, "r");
        rec.context.trust = real_field(field(kTrust), line_no, "trust");
        rec.context.d_sens = real_field(field(kD), line_no, "d");
        const std::size_t action = index_field(field(kAction), line_no, "action");
        if (action > 0xFFFFFFFFu) bad_row(line_no, "action id out of range");
        rec.action_id = static_cast<unsigned>(action);
        rec.utility_total = real_field(field(kUtility), line_no, "utility");
        rec.ci = real_field(field(kCi), line_no, "ci_score");
        const auto band = parse_risk_band(field(kBand));
        if (!band) bad_row(line_no, "unknown risk band '" + std::string(field(kBand)) + "'");
        rec.risk_band = *band;
        try {
            validate_context(rec.context);
        } catch (const ValidationError& e) {
            bad_row(line_no, e.what());
        }
        records.push_back(rec);
    }
    return records;
}

void write_band_summary_csv(std::ostream& out, const BandSummary& summary) {
    out << "band,t,mean_utility,count\n";
    for (RiskBand b : kRiskBands) {
        const auto& series = summary.band(b);
        for (std::size_t t = 0; t < series.size(); ++t) {
            out << to_string(b) << ',' << (t + 1) << ',';
            if (series[t]) {
                out << format_double(series[t]->mean) << ',' << series[t]->count;
            } else {
                out << ",0";
            }
            out << '\n';
        }
    }
}

void write_universe_summary_csv(std::ostream& out, const BandSummary& summary) {
    out << "universe,t,mean_utility,min_utility,max_utility,count\n";
    for (std::size_t u = 0; u < summary.by_universe.size(); ++u) {
        const auto& series = summary.by_universe[u];
        for (std::size_t t = 0; t < series.size(); ++t) {
            out << u << ',' << (t + 1) << ',';
            if (series[t]) {
                out << format_double(series[t]->mean) << ',' << format_double(series[t]->min)
                    << ',' << format_double(series[t]->max) << ',' << series[t]->count;
            } else {
                out << ",,,0";
            }
            out << '\n';
        }
    }
}

}  // namespace mpt
