#pragma once

#include <complex>
#include <optional>

#include "chl/torus.hpp"

namespace chl {

// Geometry bundle for the rescaled vertical slit map on the unit cylinder.
//
// A slit of length lambda on the cylinder of half-perimeter n_width rescales
// to the unit torus with parameter delta = tanh(lambda / (2 n_width)).
// a_delta is the half-width of the boundary preimage of the slit base and
// slit_height the imaginary height of the rescaled slit tip.
struct SlitParams {
    double lambda = 0.0;
    double n_width = 0.0;
    double delta = 0.0;
    double a_delta = 0.0;      // 2 arctan(delta / sqrt(1-delta^2)) = 2 arcsin(delta)
    double slit_height = 0.0;  // 2 artanh(delta) = log((1+delta)/(1-delta))
};

// Throws std::domain_error on non-positive or non-finite inputs, or when the
// resulting delta falls outside (0, 1).
SlitParams make_params(double lambda, double n_width);

// Alternate constructor: fixes delta directly and back-fills
// lambda / n_width = 2 artanh(delta).
SlitParams make_params_from_delta(double delta);

// Boundary trace of the inverse slit map at slit position 0, in signed
// coordinates theta in (-pi, pi]. Returns nullopt at theta == 0, where the
// inverse is set-valued (the arc [-a_delta, a_delta]).
std::optional<double> inverse_boundary_signed(double theta, const SlitParams& p);

// Same map with the slit at 0 on the torus. nullopt means "slit base".
std::optional<TorusAngle> inverse_boundary(TorusAngle theta, const SlitParams& p);

// d theta' / d theta of the boundary inverse. Throws std::domain_error at
// theta == 0. Value in (0, sqrt(1-delta^2)].
double inverse_derivative(TorusAngle theta, const SlitParams& p);

// Shift l(x) = S_0^inv(x) - x in signed coordinates; positive on (0, pi),
// zero at pi, odd. Throws std::domain_error at x == 0.
double point_shift(TorusAngle x, const SlitParams& p);

// Broadened inverse of an interval under the slit map at x. If x lies in i
// (half-open test) the image contains the closed arc [x-a_delta, x+a_delta];
// otherwise the interval contracts by a factor <= sqrt(1-delta^2).
TorusInterval interval_inverse(const TorusInterval& i, TorusAngle x, const SlitParams& p);

// Shift applied to a tile endpoint at signed offset d from the slit, with
// the left-limit convention at the base: d == 0 maps to -a_delta. This is
// the single rule that keeps half-open partitions tiling under the
// broadened inverse.
double broadened_shift(double d_signed, const SlitParams& p);

// Image of a tile endpoint under the broadened inverse at x.
TorusAngle endpoint_image(TorusAngle e, TorusAngle x, const SlitParams& p);

// Signed length change L(x) of the canonical interval [0, a) under the
// broadened inverse at x. Requires 0 < a < 2pi. At x in {0, a} the broadened
// one-sided convention applies (the a_delta arc contributes).
double interval_shift(double a, TorusAngle x, const SlitParams& p);

// Rescaled slit map attaching a vertical slit of height slit_height above x.
// Requires Im(z) >= 0 (throws std::domain_error otherwise). The square root
// branch keeps the image in the closed upper half-plane; on the real locus
// away from the slit base the map is real and sign-preserving, inverse to
// inverse_boundary.
std::complex<double> forward_map(std::complex<double> z, TorusAngle x, const SlitParams& p);

}  // namespace chl
