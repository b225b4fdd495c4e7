#include "chl/interval_chain.hpp"

#include <cmath>
#include <stdexcept>

#include "chl/quadrature.hpp"

namespace chl {

TorusAngle step_chain(ChainState& s, const SlitParams& p) {
    const TorusAngle x = s.rng.uniform_angle();
    s.interval = interval_inverse(s.interval, x, p);
    ++s.step_count;
    return x;
}

HittingRecord run_until_exit(const TorusInterval& i0, double low, double high,
                             const SlitParams& p, std::uint64_t seed,
                             std::uint64_t cap) {
    if (!(0.0 < low && low <= i0.length && i0.length <= high && high < kTwoPi)) {
        throw std::domain_error("run_until_exit: need 0 < low <= |i0| <= high < 2pi");
    }
    ChainState s(i0, seed);
    HittingRecord rec;
    while (s.step_count < cap) {
        step_chain(s, p);
        const double len = s.interval.length;
        if (len < low || len > high) {
            rec.steps = s.step_count;
            rec.exited_low = len < low;
            rec.final_length = len;
            return rec;
        }
    }
    rec.steps = cap;
    rec.final_length = s.interval.length;
    rec.capped = true;
    return rec;
}

HittingRecord sigma_star(const TorusInterval& i0, const SlitParams& p,
                         std::uint64_t seed, std::uint64_t cap) {
    if (i0.length > p.delta / 10.0) {
        throw std::domain_error("sigma_star: need |i0| <= delta/10");
    }
    const double low = p.delta * p.delta * p.delta;
    HittingRecord rec;
    if (i0.length <= low) {
        rec.exited_low = true;
        rec.final_length = i0.length;
        return rec;
    }
    ChainState s(i0, seed);
    while (s.step_count < cap) {
        const double prev = s.interval.length;
        step_chain(s, p);
        const double len = s.interval.length;
        if (len <= low || len > prev) {
            rec.steps = s.step_count;
            rec.exited_low = len <= low;
            rec.final_length = len;
            return rec;
        }
    }
    rec.steps = cap;
    rec.final_length = s.interval.length;
    rec.capped = true;
    return rec;
}

namespace {

std::vector<double> shift_breakpoints(double a, const SlitParams& p) {
    return {wrap_angle(a), wrap_angle(a - p.a_delta), wrap_angle(a + p.a_delta),
            p.a_delta, kTwoPi - p.a_delta, kPi};
}

}  // namespace

double drift_quadrature(double a, const SlitParams& p, double tol) {
    QuadratureOptions opt;
    opt.abs_tol = tol;
    const auto f = [&](double x) { return interval_shift(a, TorusAngle(x), p); };
    const auto bp = shift_breakpoints(a, p);
    return integrate_with_breakpoints(f, 0.0, kTwoPi, bp, opt) / kTwoPi;
}

double second_moment_quadrature(double a, const SlitParams& p, double tol) {
    if (a <= 0.0 || a >= kTwoPi) {
        throw std::domain_error("second_moment_quadrature: a in (0, 2pi) required");
    }
    QuadratureOptions opt;
    opt.abs_tol = tol;
    const auto f = [&](double x) {
        const double L = interval_shift(a, TorusAngle(x), p);
        return L * L;
    };
    const auto bp = shift_breakpoints(a, p);
    return integrate_with_breakpoints(f, 0.0, kTwoPi, bp, opt);
}

double l_squared_integral(const SlitParams& p, double tol) {
    QuadratureOptions opt;
    opt.abs_tol = tol;
    const auto f = [&](double x) {
        const double l = point_shift(TorusAngle(x), p);
        return l * l;
    };
    const double bp[] = {p.a_delta, kPi, kTwoPi - p.a_delta};
    return integrate_with_breakpoints(f, 0.0, kTwoPi, bp, opt);
}

double halving_measure(double a, const SlitParams& p) {
    if (!(a > 0.0 && a <= p.delta / 10.0)) {
        throw std::domain_error("halving_measure: need 0 < a <= delta/10");
    }
    // The interval at least halves exactly when the slit lands within a
    // distance d* beyond either endpoint; the one-step length
    // inv(a+d) - inv(d) is increasing in d, so d* is a bisection root.
    const auto new_length = [&](double d) {
        return a + interval_shift(a, TorusAngle(a + d), p);
    };
    const double target = a / 2.0;
    double lo = 0.0, hi = kPi - a;
    if (new_length(hi) <= target) return 2.0 * hi / kTwoPi;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (new_length(mid) < target ? lo : hi) = mid;
    }
    // Both endpoints contribute symmetric windows of width d*.
    return 2.0 * (0.5 * (lo + hi)) / kTwoPi;
}

}  // namespace chl
