#ifndef FLOWSIM_RANDOM_HPP
#define FLOWSIM_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace flowsim {

/// Deterministic random source backed by std::mt19937_64.
///
/// All randomness in the library flows through explicitly seeded instances
/// of this class; there is no global generator. Uniform doubles are derived
/// from the raw 64-bit output directly (53 mantissa bits), so a given seed
/// produces the same stream on every standard-conforming platform.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed);

    /// Next raw 64-bit word.
    std::uint64_t next_u64();

    /// Uniform double in [0, 1).
    double uniform01();

    /// Uniform double in [lo, hi). Requires lo <= hi.
    double uniform(double lo, double hi);

    /// True with probability p (draws exactly one uniform01).
    bool bernoulli(double p);

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// Counter-based sub-seed derivation.
///
/// Independent streams for trial i of sweep point j are obtained by folding
/// the indices into the master seed one at a time with a splitmix64 step:
///
///   derive_seed(master, {j})    -> per-setting seed
///   derive_seed(master, {j, i}) -> per-trial seed
///
/// The derivation is pure arithmetic on the indices, so batches can be
/// generated in any order (or in parallel) and still replay bit-identically.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

/// One splitmix64 mixing step; exposed for tests of the derivation rule.
std::uint64_t splitmix64(std::uint64_t x);

} // namespace flowsim

#endif
