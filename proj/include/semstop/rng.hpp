#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace semstop {

/// Mixes a list of integers into one 64-bit seed (splitmix64 chaining).
/// Used to derive independent sub-streams from (run, generation, candidate).
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts);

/// Random stream with library-independent distributions, so that results are
/// bit-identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform01();
    /// Uniform in [lo, hi].
    double uniform(double lo, double hi);
    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);
    bool coin() { return (engine_() >> 63) != 0; }
    /// Standard normal via Box-Muller.
    double normal();

private:
    std::mt19937_64 engine_;
};

}  // namespace semstop
