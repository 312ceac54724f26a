#include "flowsim/random.hpp"

namespace flowsim {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = splitmix64(master);
    for (std::uint64_t idx : path) {
        s = splitmix64(s ^ splitmix64(idx));
    }
    return s;
}

RandomSource::RandomSource(std::uint64_t seed)
    : seed_(seed), engine_(splitmix64(seed)) {}

std::uint64_t RandomSource::next_u64() {
    return engine_();
}

double RandomSource::uniform01() {
    // 53 high bits -> [0, 1) with full double resolution.
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomSource::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

bool RandomSource::bernoulli(double p) {
    return uniform01() < p;
}

} // namespace flowsim
