#include "mpt/decision.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "mpt/error.hpp"

namespace mpt {

namespace {

void check_delta(double d, const Action& a, const char* field) {
    if (!(d >= -1.0 && d <= 1.0)) {
        throw ValidationError("action " + std::to_string(a.id) + " " + field +
                              " must lie in [-1,1]");
    }
}

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

void check_universe_inputs(std::span<const ContextSample> universes,
                           std::span<const double> probs) {
    if (universes.size() != probs.size()) {
        throw ValidationError("universe list has " + std::to_string(universes.size()) +
                              " entries but probability list has " +
                              std::to_string(probs.size()));
    }
    if (universes.empty()) {
        throw ValidationError("at least one universe is required");
    }
}

}  // namespace

ActionSet::ActionSet() : actions_{Action{0, "observe", {}}} {}

ActionSet::ActionSet(std::vector<Action> actions) : actions_(std::move(actions)) {
    if (actions_.empty()) {
        throw ValidationError("action set must not be empty");
    }
    std::set<unsigned> ids;
    for (const auto& a : actions_) {
        if (!ids.insert(a.id).second) {
            throw ValidationError("duplicate action id " + std::to_string(a.id));
        }
        check_delta(a.effect.delta_r, a, "delta_r");
        check_delta(a.effect.delta_s, a, "delta_s");
        check_delta(a.effect.delta_trust, a, "delta_trust");
    }
}

bool ActionSet::all_zero_effect() const {
    return std::all_of(actions_.begin(), actions_.end(),
                       [](const Action& a) { return a.effect.is_zero(); });
}

std::vector<double> universe_probabilities(std::size_t n_universes, const ProbabilityMode& mode) {
    if (n_universes == 0) {
        throw ValidationError("n_universes must be at least 1");
    }
    if (mode.kind == ProbabilityMode::Kind::uniform) {
        return std::vector<double>(n_universes, 1.0 / static_cast<double>(n_universes));
    }
    if (mode.weights.size() != n_universes) {
        throw ValidationError("weighted probability mode needs " + std::to_string(n_universes) +
                              " weights, got " + std::to_string(mode.weights.size()));
    }
    double sum = 0.0;
    for (double v : mode.weights) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ValidationError("universe weights must be finite and nonnegative");
        }
        sum += v;
    }
    if (!(sum > 0.0)) {
        throw ValidationError("universe weights must not all be zero");
    }
    std::vector<double> probs;
    probs.reserve(n_universes);
    for (double v : mode.weights) probs.push_back(v / sum);
    return probs;
}

ContextSample apply_action(const ContextSample& c, const Action& a) {
    ContextSample out = c;
    out.r = clamp_unit(c.r + a.effect.delta_r);
    out.s = clamp_unit(c.s + a.effect.delta_s);
    out.trust = clamp_unit(c.trust + a.effect.delta_trust);
    return out;
}

std::vector<UniverseOutcome> evaluate_outcomes(const Weights& w, const Action& a,
                                               std::span<const ContextSample> universes,
                                               std::span<const double> probs) {
    check_universe_inputs(universes, probs);
    std::vector<UniverseOutcome> outcomes;
    outcomes.reserve(universes.size());
    for (std::size_t i = 0; i < universes.size(); ++i) {
        UniverseOutcome o;
        o.universe_id = i;
        o.context = apply_action(universes[i], a);
        o.probability = probs[i];
        o.ci = ci_score(o.context);
        o.utility = utility(w, o.context, o.ci);
        outcomes.push_back(o);
    }
    return outcomes;
}

double expected_utility(const Weights& w, const Action& a,
                        std::span<const ContextSample> universes,
                        std::span<const double> probs) {
    double eu = 0.0;
    for (const auto& o : evaluate_outcomes(w, a, universes, probs)) {
        eu += o.probability * o.utility.total;
    }
    return eu;
}

ActionChoice select_action(const Weights& w, const ActionSet& actions,
                           std::span<const ContextSample> universes,
                           std::span<const double> probs) {
    const auto& list = actions.actions();
    if (list.empty()) {
        throw ValidationError("action set must not be empty");
    }
    const Action* best = nullptr;
    double best_eu = 0.0;
    for (const auto& a : list) {
        const double eu = expected_utility(w, a, universes, probs);
        if (best == nullptr || eu > best_eu || (eu == best_eu && a.id < best->id)) {
            best = &a;
            best_eu = eu;
        }
    }
    return {*best, best_eu};
}

ValueEstimate value_recursive(const Weights& w, std::span<const double> per_step_eu) {
    if (per_step_eu.empty()) {
        throw ValidationError("value recursion needs at least one step");
    }
    const double lambda = w.lambda_discount();
    double v = 0.0;
    for (auto it = per_step_eu.rbegin(); it != per_step_eu.rend(); ++it) {
        v = *it + lambda * v;
    }
    return {std::vector<double>(per_step_eu.begin(), per_step_eu.end()), v};
}

}  // namespace mpt
