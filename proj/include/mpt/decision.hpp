#pragma once

// Expected-utility action selection across a finite set of universes and the
// discounted value recursion over a finite horizon.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mpt/core_model.hpp"

namespace mpt {

/// Additive change an action makes to the system-side context fields. User
/// traits (rho, d_sens) are never touched.
struct ActionEffect {
    double delta_r = 0.0;
    double delta_s = 0.0;
    double delta_trust = 0.0;

    bool is_zero() const { return delta_r == 0.0 && delta_s == 0.0 && delta_trust == 0.0; }
    bool operator==(const ActionEffect&) const = default;
};

struct Action {
    unsigned id = 0;
    std::string label;
    ActionEffect effect;

    bool operator==(const Action&) const = default;
};

/// Non-empty list of actions with unique ids and deltas in [-1, 1].
class ActionSet {
public:
    /// The replication set: a single zero-effect "observe" action with id 0.
    ActionSet();
    explicit ActionSet(std::vector<Action> actions);

    const std::vector<Action>& actions() const { return actions_; }
    std::size_t size() const { return actions_.size(); }
    bool all_zero_effect() const;

    bool operator==(const ActionSet&) const = default;

private:
    std::vector<Action> actions_;
};

struct ProbabilityMode {
    enum class Kind { uniform, weighted };

    Kind kind = Kind::uniform;
    std::vector<double> weights;  // used by Kind::weighted only

    static ProbabilityMode uniform() { return {}; }
    static ProbabilityMode weighted(std::vector<double> w) {
        return {Kind::weighted, std::move(w)};
    }

    bool operator==(const ProbabilityMode&) const = default;
};

/// Distribution over `n_universes` universes. Weighted mode normalizes the
/// supplied vector, which must have exactly `n_universes` finite nonnegative
/// entries with a positive sum.
std::vector<double> universe_probabilities(std::size_t n_universes, const ProbabilityMode& mode);

/// Clamped additive update of (r, s, trust).
ContextSample apply_action(const ContextSample& c, const Action& a);

struct UniverseOutcome {
    std::size_t universe_id = 0;
    ContextSample context;  // post-action
    double probability = 0.0;
    UtilityBreakdown utility;
    double ci = 0.0;
};

/// Per-universe consequences of taking `a`: each universe is evaluated on its
/// own post-action context.
std::vector<UniverseOutcome> evaluate_outcomes(const Weights& w, const Action& a,
                                               std::span<const ContextSample> universes,
                                               std::span<const double> probs);

/// Sum over universes of probability times post-action utility.
double expected_utility(const Weights& w, const Action& a,
                        std::span<const ContextSample> universes,
                        std::span<const double> probs);

struct ActionChoice {
    Action action;
    double expected_utility = 0.0;
};

/// Argmax of expected utility. Ties go to the lowest action id regardless of
/// the order actions are listed in.
ActionChoice select_action(const Weights& w, const ActionSet& actions,
                           std::span<const ContextSample> universes,
                           std::span<const double> probs);

struct ValueEstimate {
    std::vector<double> per_step_expected_utility;
    double discounted_value = 0.0;
};

/// Backward recursion V_t = EU_t + lambda * V_{t+1} with V = 0 past the last
/// step. Throws ValidationError on an empty list.
ValueEstimate value_recursive(const Weights& w, std::span<const double> per_step_eu);

}  // namespace mpt
