#include "mpt/core_model.hpp"

#include <cmath>
#include <string>

#include "mpt/error.hpp"

namespace mpt {

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw ValidationError(std::string("weight '") + name + "' must be finite");
    }
}

void require_unit(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw ValidationError(std::string("context field '") + name + "' = " +
                              std::to_string(v) + " is outside [0,1]");
    }
}

}  // namespace

Weights::Weights() : Weights(1.0, 0.8, 0.9, 0.6, 0.5, 0.0, 0.0) {}

Weights::Weights(double alpha, double beta, double gamma, double delta, double zeta,
                 double theta, double lambda_discount)
    : alpha_(alpha),
      beta_(beta),
      gamma_(gamma),
      delta_(delta),
      zeta_(zeta),
      theta_(theta),
      lambda_discount_(lambda_discount) {
    require_finite(alpha_, "alpha");
    require_finite(beta_, "beta");
    require_finite(gamma_, "gamma");
    require_finite(delta_, "delta");
    require_finite(zeta_, "zeta");
    require_finite(theta_, "theta");
    if (!(lambda_discount_ >= 0.0 && lambda_discount_ <= 1.0)) {
        throw ValidationError("lambda_discount must lie in [0,1], got " +
                              std::to_string(lambda_discount_));
    }
}

Weights Weights::scaled(double k) const {
    return Weights(alpha_ * k, beta_ * k, gamma_ * k, delta_ * k, zeta_ * k, theta_ * k,
                   lambda_discount_);
}

void validate_context(const ContextSample& c) {
    require_unit(c.rho, "rho");
    require_unit(c.s, "s");
    require_unit(c.r, "r");
    require_unit(c.trust, "trust");
    require_unit(c.d_sens, "d_sens");
}

double g_demographic(const DemographicProfile& profile) {
    if (profile.empty()) return 0.0;
    double weighted = 0.0;
    double weight_sum = 0.0;
    for (const auto& attr : profile) {
        if (!(attr.value >= 0.0 && attr.value <= 1.0)) {
            throw ValidationError("demographic attribute '" + attr.name +
                                  "' value is outside [0,1]");
        }
        if (!(attr.weight >= 0.0) || !std::isfinite(attr.weight)) {
            throw ValidationError("demographic attribute '" + attr.name +
                                  "' weight must be finite and nonnegative");
        }
        weighted += attr.weight * attr.value;
        weight_sum += attr.weight;
    }
    if (!(weight_sum > 0.0)) {
        throw ValidationError("demographic profile weights must sum to a positive value");
    }
    return weighted / weight_sum;
}

UtilityBreakdown utility(const Weights& w, const ContextSample& c, double ci) {
    validate_context(c);
    if (!(ci >= 0.0) || !std::isfinite(ci)) {
        throw ValidationError("CI score must be finite and nonnegative");
    }
    UtilityBreakdown u;
    u.term_privacy = w.alpha() * c.rho;
    u.term_security = w.beta() * c.s;
    u.term_risk = -(w.gamma() * c.r);
    u.term_trust = w.delta() * c.trust;
    u.term_demographic = w.zeta() * c.d_sens;
    u.term_ci = w.theta() * ci;
    u.total = u.term_privacy + u.term_security + u.term_risk + u.term_trust +
              u.term_demographic + u.term_ci;
    return u;
}

double ci_score(const ContextSample& c) {
    validate_context(c);
    return (c.rho + c.s + c.trust + c.d_sens) / (1.0 + c.r);
}

}  // namespace mpt
