#include "mpt/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "mpt/error.hpp"

namespace mpt {

namespace {

constexpr int kMaxIterations = 300;
constexpr double kCfEpsilon = 1e-15;
constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a, b), modified Lentz.
double beta_continued_fraction(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kCfEpsilon) break;
    }
    return h;
}

// `y` is 1 - x, supplied by the caller so it can be formed without cancellation.
double incomplete_beta(double a, double b, double x, double y) {
    if (x <= 0.0) return 0.0;
    if (y <= 0.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log(y);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, y) / b;
}

void require_sample_size(std::size_t n) {
    if (n < 4) {
        throw ValidationError("correlation inference needs n >= 4, got " + std::to_string(n));
    }
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw ValidationError("incomplete beta requires a, b > 0");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw ValidationError("incomplete beta requires x in [0,1]");
    }
    return incomplete_beta(a, b, x, 1.0 - x);
}

double student_t_two_sided(double t, double df) {
    if (!(df > 0.0)) throw ValidationError("degrees of freedom must be positive");
    if (std::isnan(t)) throw ValidationError("t statistic is NaN");
    if (std::isinf(t)) return 0.0;
    const double t2 = t * t;
    const double denom = df + t2;
    return incomplete_beta(0.5 * df, 0.5, df / denom, t2 / denom);
}

double student_t_cdf(double t, double df) {
    const double tail = 0.5 * student_t_two_sided(t, df);
    return t < 0.0 ? tail : 1.0 - tail;
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw ValidationError("pearson_r: series lengths differ");
    }
    const std::size_t n = x.size();
    if (n < 3) throw ValidationError("pearson_r: need at least 3 points");

    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) {
        throw DegenerateDataError("pearson_r: series has zero variance");
    }
    const double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

double p_value_two_sided(double r, std::size_t n) {
    require_sample_size(n);
    if (!(std::fabs(r) <= 1.0)) throw ValidationError("correlation must lie in [-1,1]");
    if (std::fabs(r) == 1.0) return 0.0;
    const double df = static_cast<double>(n - 2);
    const double t = r * std::sqrt(df / (1.0 - r * r));
    return student_t_two_sided(t, df);
}

ConfidenceInterval fisher_ci_95(double r, std::size_t n) {
    require_sample_size(n);
    if (!(std::fabs(r) < 1.0)) {
        throw ValidationError("Fisher interval is undefined for |r| >= 1");
    }
    const double z = std::atanh(r);
    const double half = kZ975 / std::sqrt(static_cast<double>(n - 3));
    return {std::tanh(z - half), std::tanh(z + half)};
}

std::string_view to_string(Variable v) {
    switch (v) {
        case Variable::rho: return "rho";
        case Variable::s: return "s";
        case Variable::r: return "r";
        case Variable::trust: return "trust";
        case Variable::d_sens: return "d_sens";
        case Variable::ci: return "ci";
    }
    return "unknown";
}

std::optional<Variable> parse_variable(std::string_view text) {
    for (Variable v : {Variable::rho, Variable::s, Variable::r, Variable::trust,
                       Variable::d_sens, Variable::ci}) {
        if (to_string(v) == text) return v;
    }
    return std::nullopt;
}

const std::vector<HypothesisSpec>& replication_hypotheses() {
    static const std::vector<HypothesisSpec> specs{
        {"H1", "Privacy Preference - Utility", Variable::rho, ExpectedSign::positive},
        {"H2", "Contextual Risk - Utility", Variable::r, ExpectedSign::negative},
        {"H3", "Trust - Utility", Variable::trust, ExpectedSign::positive},
        {"H4", "Security Level - Utility", Variable::s, ExpectedSign::none},
        {"H5", "CI - Utility", Variable::ci, ExpectedSign::positive},
    };
    return specs;
}

double variable_value(const TrajectoryRecord& rec, Variable v) {
    switch (v) {
        case Variable::rho: return rec.context.rho;
        case Variable::s: return rec.context.s;
        case Variable::r: return rec.context.r;
        case Variable::trust: return rec.context.trust;
        case Variable::d_sens: return rec.context.d_sens;
        case Variable::ci: return rec.ci;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

Inference correlate(std::span<const double> x, std::span<const double> y) {
    Inference inf;
    inf.r = pearson_r(x, y);
    inf.p_value = p_value_two_sided(inf.r, x.size());
    if (std::fabs(inf.r) == 1.0) {
        inf.ci_low = inf.r;
        inf.ci_high = inf.r;
    } else {
        const auto ci = fisher_ci_95(inf.r, x.size());
        inf.ci_low = ci.low;
        inf.ci_high = ci.high;
    }
    inf.significant_05 = inf.p_value < 0.05;
    return inf;
}

std::vector<HypothesisResult> run_hypotheses(std::span<const TrajectoryRecord> records) {
    if (records.empty()) {
        throw ValidationError("hypothesis tests need at least one record");
    }
    std::vector<double> utility;
    utility.reserve(records.size());
    for (const auto& rec : records) utility.push_back(rec.utility_total);

    std::vector<HypothesisResult> results;
    for (const auto& spec : replication_hypotheses()) {
        HypothesisResult res;
        res.name = spec.name;
        res.pair = spec.pair;
        res.x_variable = spec.x_variable;
        res.n = records.size();
        if (res.n < 4) {
            res.status = "insufficient_samples";
            results.push_back(std::move(res));
            continue;
        }
        std::vector<double> x;
        x.reserve(records.size());
        for (const auto& rec : records) x.push_back(variable_value(rec, spec.x_variable));
        try {
            res.inference = correlate(x, utility);
            res.status = "ok";
        } catch (const DegenerateDataError&) {
            res.status = "degenerate_variance";
        }
        results.push_back(std::move(res));
    }
    return results;
}

double analytic_r(Variable v, const Weights& w, const SamplingSpec& spec) {
    if (v == Variable::ci) {
        throw UnsupportedVariableError(
            "no closed-form correlation between the CI score and utility");
    }
    if (w.theta() != 0.0) {
        throw ValidationError("analytic correlation requires theta = 0");
    }
    spec.validate();
    const auto sigma = [](const UniformRange& range) {
        return (range.hi - range.lo) / std::sqrt(12.0);
    };
    // (coefficient, sigma) in Variable order rho, s, r, trust, d_sens
    const std::array<std::pair<double, double>, 5> terms{{
        {w.alpha(), sigma(spec.rho)},
        {w.beta(), sigma(spec.s)},
        {-w.gamma(), sigma(spec.r)},
        {w.delta(), sigma(spec.trust)},
        {w.zeta(), sigma(spec.d)},
    }};
    double variance = 0.0;
    for (const auto& [coef, sd] : terms) variance += coef * coef * sd * sd;
    if (!(variance > 0.0)) {
        throw ValidationError("utility has zero variance under this configuration");
    }
    const auto& [coef, sd] = terms[static_cast<std::size_t>(v)];
    return coef * sd / std::sqrt(variance);
}

}  // namespace mpt
