#pragma once

#include <cstdint>

#include "chl/rng.hpp"
#include "chl/slit_map.hpp"
#include "chl/torus.hpp"

namespace chl {

// Embedded Markov chain of a torus interval under broadened inverse slit
// maps at i.i.d. uniform positions. The interval length is a bounded
// positive martingale.
struct ChainState {
    TorusInterval interval;
    std::uint64_t step_count = 0;
    Rng rng;

    ChainState(TorusInterval i0, std::uint64_t seed) : interval(i0), rng(seed) {}
};

inline constexpr std::uint64_t kDefaultStepCap = 10'000'000'000ULL;

// One transition: draws x uniform, applies the broadened inverse.
// Returns the drawn position.
TorusAngle step_chain(ChainState& s, const SlitParams& p);

struct HittingRecord {
    std::uint64_t steps = 0;
    bool exited_low = false;
    double final_length = 0.0;
    bool capped = false;  // cap exceeded; steps == cap, exit side unset
};

// Simulates until length < low or length > high (strict barriers).
// Requires 0 < low <= |i0| <= high < 2pi.
HittingRecord run_until_exit(const TorusInterval& i0, double low, double high,
                             const SlitParams& p, std::uint64_t seed,
                             std::uint64_t cap = kDefaultStepCap);

// sigma* = inf{t >= 1 : |I_t| <= delta^3 or |I_t| > |I_{t-1}|}.
// Requires |i0| <= delta/10; returns steps = 0 when |i0| <= delta^3 already.
// exited_low reports whether the exit was the delta^3 barrier.
HittingRecord sigma_star(const TorusInterval& i0, const SlitParams& p,
                         std::uint64_t seed, std::uint64_t cap = kDefaultStepCap);

// (1/2pi) Int_0^2pi L(x) dx for the canonical interval [0, a); zero by the
// martingale property, so the returned value is a quadrature residual.
double drift_quadrature(double a, const SlitParams& p, double tol = 1e-12);

// Int_0^2pi L(x)^2 dx = (64/3) delta^3 + O(delta^3.5) for a in [delta,
// 2pi - delta]. The one-step conditional second moment of the length
// increment given |I| = a is this value divided by 2pi (the slit position is
// uniform with density 1/2pi).
double second_moment_quadrature(double a, const SlitParams& p, double tol = 1e-14);

// Int_0^2pi l(x)^2 dx = (32/3) delta^3 + O(delta^3.5).
double l_squared_integral(const SlitParams& p, double tol = 1e-14);

// Normalized measure of slit positions x for which the canonical interval
// [0, a) at least halves in one step. Requires 0 < a <= delta/10.
// Lower bound (delta - a)/2pi.
double halving_measure(double a, const SlitParams& p);

}  // namespace chl
