#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace lvlm {

// Portable pseudo-random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard; all conversions to uniform, integer,
// categorical and normal variates are implemented here rather than with the
// standard distributions, whose algorithms are implementation-defined. A
// given seed therefore yields the same stream on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    // Uniform integer in [0, n), n > 0.
    std::size_t below(std::size_t n);
    // Standard normal via the Box-Muller transform.
    double normal();
    // Index drawn proportionally to nonnegative weights with a positive sum.
    std::size_t categorical(std::span<const double> weights);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Derives an independent seed for a secondary stream (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace lvlm
