#pragma once

// Sectioned key-value experiment configuration.
//
//   # comment
//   [weights]
//   alpha = 1.0            beta, gamma, delta, zeta, theta, lambda_discount
//   [sampling]
//   rho_range = 0, 1       s_range, r_range, trust_range, d_range
//   [actions]
//   action = 0, observe, 0, 0, 0     id, label, delta_r, delta_s, delta_trust
//   [run]
//   n_universes = 5        horizon, n_replications, master_seed
//   probability_mode = uniform       or "weighted" with probability_weights = 1, 1, 2
//
// Omitted keys keep the replication defaults. `gamma` may be written signed;
// only its magnitude is kept. Unknown sections or keys, duplicate keys and
// out-of-range values are errors that name the key and line.

#include <filesystem>
#include <string>
#include <string_view>

#include "mpt/error.hpp"
#include "mpt/simulation.hpp"

namespace mpt {

class ConfigError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

struct LoadedConfig {
    SimulationConfig config;
    bool seed_specified = false;  // master_seed present in the file
};

LoadedConfig parse_config(std::string_view text, std::string_view source = "<config>");

/// Throws IoError when the file cannot be read and ConfigError otherwise.
LoadedConfig load_config(const std::filesystem::path& path);

/// Renders `cfg` in the same format, so parse_config(format_config(c)) == c.
std::string format_config(const SimulationConfig& cfg);

}  // namespace mpt
