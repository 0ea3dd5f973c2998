#pragma once

// Pearson correlation inference and the hypothesis suite run over simulated
// trajectories.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mpt/core_model.hpp"
#include "mpt/simulation.hpp"

namespace mpt {

// 95% two-sided standard normal quantile, fixed to 6 decimals.
inline constexpr double kZ975 = 1.959964;

/// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction.
/// Requires a, b > 0 and x in [0, 1].
double regularized_incomplete_beta(double a, double b, double x);

/// P(|T| >= |t|) for Student's t with `df` degrees of freedom. Computed as a
/// tail integral directly, so small p-values keep full relative precision.
double student_t_two_sided(double t, double df);

/// P(T <= t).
double student_t_cdf(double t, double df);

/// Product-moment correlation. Throws ValidationError for mismatched lengths
/// or fewer than 3 points and DegenerateDataError when either series is
/// constant.
double pearson_r(std::span<const double> x, std::span<const double> y);

/// Two-sided p-value of H0: rho = 0 via t = r * sqrt((n-2)/(1-r^2)).
/// |r| == 1 gives exactly 0.
double p_value_two_sided(double r, std::size_t n);

struct ConfidenceInterval {
    double low = 0.0;
    double high = 0.0;
};

/// Fisher z interval tanh(atanh(r) -/+ 1.959964/sqrt(n-3)). Rejects |r| >= 1.
ConfidenceInterval fisher_ci_95(double r, std::size_t n);

enum class Variable { rho, s, r, trust, d_sens, ci };

std::string_view to_string(Variable v);
std::optional<Variable> parse_variable(std::string_view text);

enum class ExpectedSign { positive, negative, none };

struct HypothesisSpec {
    std::string name;
    std::string pair;  // human-readable "X - Utility" label
    Variable x_variable;
    ExpectedSign expected_sign;
};

/// H1..H5: privacy preference, contextual risk, trust, security level and CI
/// score, each against utility.
const std::vector<HypothesisSpec>& replication_hypotheses();

struct Inference {
    double r = 0.0;
    double p_value = 1.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    bool significant_05 = false;
};

struct HypothesisResult {
    std::string name;
    std::string pair;
    Variable x_variable = Variable::rho;
    std::size_t n = 0;
    std::string status;  // "ok", "degenerate_variance" or "insufficient_samples"
    std::optional<Inference> inference;
};

/// Full inference for one pair of series. A perfect correlation reports p = 0
/// and the degenerate interval [r, r].
Inference correlate(std::span<const double> x, std::span<const double> y);

/// Pools every record into one sample and tests each replication hypothesis.
/// Degenerate data marks that hypothesis only; the others still run.
std::vector<HypothesisResult> run_hypotheses(std::span<const TrajectoryRecord> records);

double variable_value(const TrajectoryRecord& rec, Variable v);

/// Closed-form correlation between one input and utility when the inputs are
/// independent uniforms, actions have no effect and theta = 0:
/// w_i * sigma_i / sqrt(sum_j w_j^2 sigma_j^2), with the risk weight entering
/// as -gamma. Throws UnsupportedVariableError for Variable::ci and
/// ValidationError when theta != 0 or utility has zero variance.
double analytic_r(Variable v, const Weights& w, const SamplingSpec& spec);

}  // namespace mpt
