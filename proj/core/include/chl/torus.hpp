#pragma once

#include <cmath>
#include <numbers>

namespace chl {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kPi = std::numbers::pi;

// Canonical representative in [0, 2pi).
inline double wrap_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    // fmod can return exactly 2pi after the correction when a is a tiny
    // negative number.
    if (r >= kTwoPi) r = 0.0;
    return r;
}

// Signed representative in (-pi, pi].
inline double signed_angle(double a) {
    double r = wrap_angle(a);
    return r > kPi ? r - kTwoPi : r;
}

// A point of the unit torus R/2piZ, stored in [0, 2pi).
struct TorusAngle {
    double value = 0.0;

    TorusAngle() = default;
    explicit TorusAngle(double a) : value(wrap_angle(a)) {}

    TorusAngle operator+(double d) const { return TorusAngle(value + d); }
    TorusAngle operator-(double d) const { return TorusAngle(value - d); }

    // Signed displacement from other to this, in (-pi, pi].
    double signed_from(TorusAngle other) const {
        return signed_angle(value - other.value);
    }
};

// Forward (counterclockwise) distance from a to b, in [0, 2pi).
inline double forward_distance(TorusAngle a, TorusAngle b) {
    return wrap_angle(b.value - a.value);
}

// Arc [start, start+length) on the torus. length == 2pi is the full torus,
// length == 0 the empty arc anchored at start.
struct TorusInterval {
    TorusAngle start;
    double length = 0.0;

    TorusInterval() = default;
    TorusInterval(TorusAngle s, double len) : start(s), length(len) {}

    static TorusInterval full() { return {TorusAngle(0.0), kTwoPi}; }

    bool is_full() const { return length >= kTwoPi; }
    bool is_empty() const { return length <= 0.0; }

    TorusAngle end() const { return start + length; }

    // Half-open membership test.
    bool contains(TorusAngle x) const {
        if (is_full()) return true;
        return forward_distance(start, x) < length;
    }
};

}  // namespace chl
