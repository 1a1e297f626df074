#pragma once

#include <cstdint>
#include <random>

namespace frailsurv {

using Rng = std::mt19937_64;

/// splitmix64 step; used to derive decorrelated substream seeds from one
/// master seed so that e.g. the four draw streams of the simulator stay
/// independent and prefix-stable when n changes.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

/// Substream k of a master seed.
inline Rng make_substream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed ^ (0xd1342543de82ef95ULL * (stream + 1));
    std::uint64_t mixed = splitmix64(s);
    return Rng(mixed);
}

inline double draw_uniform(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline double draw_normal(Rng& rng) {
    return std::normal_distribution<double>(0.0, 1.0)(rng);
}

inline double draw_exponential(Rng& rng, double rate) {
    return std::exponential_distribution<double>(rate)(rng);
}

/// Gamma(shape, scale) via Marsaglia-Tsang squeeze; shape < 1 boosted
/// through the u^{1/shape} identity.
double draw_gamma(Rng& rng, double shape, double scale);

}  // namespace frailsurv
