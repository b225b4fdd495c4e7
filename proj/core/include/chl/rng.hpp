#pragma once

#include <cstdint>
#include <random>

#include "chl/torus.hpp"

namespace chl {

// SplitMix64 finalizer; used to derive independent streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed for stream `index` of experiment `seed`. Every replicate's stream is
// a pure function of (seed, index), independent of scheduling.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

// Deterministic replicate-local generator.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    double uniform() { return unit_(engine_); }

    TorusAngle uniform_angle() { return TorusAngle(kTwoPi * unit_(engine_)); }

    double exponential(double rate) {
        return -std::log1p(-unit_(engine_)) / rate;
    }

  private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

}  // namespace chl
