#pragma once

// Pointwise model of a privacy decision: the weighted utility of an action in
// context and the contextual-integrity (CI) score of a context.

#include <string>
#include <vector>

namespace mpt {

/// Tunable coefficients of the utility function plus the discount factor of
/// the value recursion.
///
/// `gamma` is stored as the magnitude of the risk penalty: the utility applies
/// it with a minus sign, so a positive gamma means risk lowers utility. All
/// coefficients must be finite and `lambda_discount` must lie in [0, 1];
/// violations throw ValidationError at construction.
class Weights {
public:
    /// Replication defaults: 1.0 / 0.8 / 0.9 / 0.6 / 0.5, theta = 0, lambda = 0.
    Weights();
    Weights(double alpha, double beta, double gamma, double delta, double zeta,
            double theta, double lambda_discount);

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double gamma() const { return gamma_; }
    double delta() const { return delta_; }
    double zeta() const { return zeta_; }
    double theta() const { return theta_; }
    double lambda_discount() const { return lambda_discount_; }

    /// Multiplies every utility coefficient by `k`; the discount is unchanged.
    Weights scaled(double k) const;

    bool operator==(const Weights&) const = default;

private:
    double alpha_;
    double beta_;
    double gamma_;
    double delta_;
    double zeta_;
    double theta_;
    double lambda_discount_;
};

/// One realization of the contextual variables. Every field is normalized to
/// [0, 1].
struct ContextSample {
    double rho = 0.0;     // privacy preference
    double s = 0.0;       // security level
    double r = 0.0;       // contextual risk
    double trust = 0.0;
    double d_sens = 0.0;  // demographic sensitivity

    bool operator==(const ContextSample&) const = default;
};

// Throws ValidationError naming the first field outside [0, 1] (NaN included).
void validate_context(const ContextSample& c);

struct DemographicAttribute {
    std::string name;
    double value = 0.0;   // normalized score in [0, 1]
    double weight = 1.0;  // nonnegative
};

using DemographicProfile = std::vector<DemographicAttribute>;

/// Weighted average of the attribute scores, in [0, 1]. An empty profile has
/// no demographic influence and maps to 0.
///
/// Throws ValidationError for a value outside [0, 1], a negative weight, or a
/// non-empty profile whose weights sum to zero.
double g_demographic(const DemographicProfile& profile);

struct UtilityBreakdown {
    double term_privacy = 0.0;
    double term_security = 0.0;
    double term_risk = 0.0;  // already negated: -gamma * r
    double term_trust = 0.0;
    double term_demographic = 0.0;
    double term_ci = 0.0;
    double total = 0.0;
};

/// alpha*rho + beta*s - gamma*r + delta*trust + zeta*d_sens + theta*ci.
///
/// `total` is the left-to-right sum of the six stored terms, so it matches a
/// re-summation of the breakdown bit for bit.
UtilityBreakdown utility(const Weights& w, const ContextSample& c, double ci);

/// (rho + s + trust + d_sens) / (1 + r), in [0, 4] for a valid context.
double ci_score(const ContextSample& c);

}  // namespace mpt
