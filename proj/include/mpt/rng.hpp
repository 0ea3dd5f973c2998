#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>

namespace mpt {

// SplitMix64 finalizer applied to `x + golden gamma`, i.e. the first output
// of a SplitMix64 generator seeded with `x`.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    std::uint64_t z = x + 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// SplitMix64 generator. The draw sequence depends only on the 64-bit state,
/// so it is identical on every platform.
class RngStream {
public:
    constexpr explicit RngStream(std::uint64_t state) : state_(state) {}

    constexpr std::uint64_t next_u64() {
        const std::uint64_t out = splitmix64(state_);
        state_ += 0x9E3779B97F4A7C15ull;
        return out;
    }

    // 53 random mantissa bits, uniform on [0, 1).
    constexpr double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on [lo, hi); returns lo exactly when lo == hi.
    constexpr double uniform(double lo, double hi) {
        const double u = next_unit();
        return std::min(hi, lo + (hi - lo) * u);
    }

    constexpr std::uint64_t state() const { return state_; }

    constexpr bool operator==(const RngStream&) const = default;

private:
    std::uint64_t state_;
};

/// Stream for one (replication, universe) unit of work.
constexpr RngStream derive_stream(std::uint64_t master_seed, std::size_t replication,
                                  std::size_t universe) {
    const std::uint64_t mixed = master_seed ^
                                (static_cast<std::uint64_t>(replication) * 0x9E3779B97F4A7C15ull) ^
                                (static_cast<std::uint64_t>(universe) * 0xBF58476D1CE4E5B9ull);
    return RngStream(splitmix64(mixed));
}

}  // namespace mpt
