#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace mapoi {

/// SplitMix64 finalizer; used to decorrelate derived seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed of the substream `stream` under `master`. Pure function of its inputs,
/// so work scheduled on any thread reproduces the same draws.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept;

/// Same, keyed by a short label so unrelated consumers never share a stream.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                          std::uint64_t stream = 0) noexcept;

/// Seeded random stream. Uniform draws are built from raw 64-bit output so
/// results do not depend on the standard library's distribution classes.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer on [0, n).
    std::size_t index(std::size_t n);

private:
    std::mt19937_64 engine_;
};

}  // namespace mapoi
