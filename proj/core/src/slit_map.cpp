#include "chl/slit_map.hpp"

#include <cmath>
#include <stdexcept>

namespace chl {

namespace {

void require_finite_positive(double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0) {
        throw std::domain_error(std::string("slit params: ") + name + " must be finite and positive");
    }
}

// l(theta) in signed coordinates, theta in (0, pi]. The two branches keep
// tan(theta/2) (resp. cot via the complement) bounded and express the shift
// as a single arctan of a cancellation-free ratio.
double shift_positive(double theta, double delta) {
    const double d2 = delta * delta;
    if (theta <= kPi / 2.0) {
        const double t = std::tan(theta / 2.0);
        const double u = std::sqrt((t * t + d2) / (1.0 - d2));
        const double diff = (d2 * (1.0 + t * t) / (1.0 - d2)) / (u + t);
        return 2.0 * std::atan(diff / (1.0 + u * t));
    }
    // theta in (pi/2, pi]: c = cot(theta/2) = tan((pi - theta)/2) is small.
    const double c = std::tan((kPi - theta) / 2.0);
    const double s = std::sqrt(1.0 + d2 * c * c);
    const double g = std::sqrt(1.0 - d2) * c / s;
    const double diff = c * d2 * (1.0 + c * c) / (s * (s + std::sqrt(1.0 - d2)));
    return 2.0 * std::atan(diff / (1.0 + c * g));
}

double shift_signed(double theta, double delta) {
    return theta >= 0.0 ? shift_positive(theta, delta) : -shift_positive(-theta, delta);
}

// Endpoint shift under the broadened inverse: at the slit base the endpoint
// convention is the left limit -a_delta (half-open membership puts the base
// point itself in the interval starting there).
double endpoint_shift(double theta, const SlitParams& p) {
    if (theta == 0.0) return -p.a_delta;
    return shift_signed(theta, p.delta);
}

}  // namespace

SlitParams make_params(double lambda, double n_width) {
    require_finite_positive(lambda, "lambda");
    require_finite_positive(n_width, "n_width");
    SlitParams p;
    p.lambda = lambda;
    p.n_width = n_width;
    p.delta = std::tanh(lambda / (2.0 * n_width));
    if (p.delta <= 0.0 || p.delta >= 1.0) {
        throw std::domain_error("slit params: delta outside (0, 1)");
    }
    p.a_delta = 2.0 * std::asin(p.delta);
    p.slit_height = std::log((1.0 + p.delta) / (1.0 - p.delta));
    if (p.a_delta >= kPi) {
        throw std::domain_error("slit params: a_delta >= pi");
    }
    return p;
}

SlitParams make_params_from_delta(double delta) {
    if (!std::isfinite(delta) || delta <= 0.0 || delta >= 1.0) {
        throw std::domain_error("slit params: delta must lie in (0, 1)");
    }
    SlitParams p;
    p.n_width = 1.0;
    p.lambda = 2.0 * std::atanh(delta);
    p.delta = delta;
    p.a_delta = 2.0 * std::asin(delta);
    p.slit_height = std::log((1.0 + delta) / (1.0 - delta));
    if (p.a_delta >= kPi) {
        throw std::domain_error("slit params: a_delta >= pi");
    }
    return p;
}

std::optional<double> inverse_boundary_signed(double theta, const SlitParams& p) {
    theta = signed_angle(theta);
    if (theta == 0.0) return std::nullopt;
    return theta + shift_signed(theta, p.delta);
}

std::optional<TorusAngle> inverse_boundary(TorusAngle theta, const SlitParams& p) {
    auto r = inverse_boundary_signed(theta.value, p);
    if (!r) return std::nullopt;
    return TorusAngle(*r);
}

double inverse_derivative(TorusAngle theta, const SlitParams& p) {
    const double th = std::abs(signed_angle(theta.value));
    if (th == 0.0) throw std::domain_error("inverse_derivative: undefined at the slit base");
    const double d2 = p.delta * p.delta;
    if (th <= kPi / 2.0) {
        const double t = std::tan(th / 2.0);
        return std::sqrt(1.0 - d2) * t / std::sqrt(t * t + d2);
    }
    const double c = std::tan((kPi - th) / 2.0);
    return std::sqrt(1.0 - d2) / std::sqrt(1.0 + d2 * c * c);
}

double point_shift(TorusAngle x, const SlitParams& p) {
    const double th = signed_angle(x.value);
    if (th == 0.0) throw std::domain_error("point_shift: undefined at the slit base");
    return shift_signed(th, p.delta);
}

double broadened_shift(double d_signed, const SlitParams& p) {
    return endpoint_shift(signed_angle(d_signed), p);
}

TorusAngle endpoint_image(TorusAngle e, TorusAngle x, const SlitParams& p) {
    const double d = signed_angle(e.value - x.value);
    return TorusAngle(x.value + d + endpoint_shift(d, p));
}

TorusInterval interval_inverse(const TorusInterval& i, TorusAngle x, const SlitParams& p) {
    if (i.is_full()) return TorusInterval::full();
    if (i.is_empty()) return i;
    const double d_start = signed_angle(i.start.value - x.value);
    const double d_end = signed_angle(i.start.value + i.length - x.value);
    const double ls = endpoint_shift(d_start, p);
    const double le = endpoint_shift(d_end, p);
    double len = i.length + le - ls;
    if (len < 0.0) len = 0.0;
    if (len > kTwoPi) len = kTwoPi;
    return TorusInterval(TorusAngle(x.value + d_start + ls), len);
}

double interval_shift(double a, TorusAngle x, const SlitParams& p) {
    if (a <= 0.0 || a >= kTwoPi) {
        throw std::domain_error("interval_shift: a must lie in (0, 2pi)");
    }
    const double d_start = signed_angle(-x.value);
    const double d_end = signed_angle(a - x.value);
    return endpoint_shift(d_end, p) - endpoint_shift(d_start, p);
}

std::complex<double> forward_map(std::complex<double> z, TorusAngle x, const SlitParams& p) {
    if (z.imag() < 0.0) throw std::domain_error("forward_map: Im(z) must be nonnegative");
    const double d2 = p.delta * p.delta;
    const double wr = signed_angle(z.real() - x.value);
    std::complex<double> r;
    if (z.imag() == 0.0) {
        const double t = std::tan(wr / 2.0);
        const double u = t * t * (1.0 - d2) - d2;
        if (u >= 0.0) {
            r = std::copysign(std::sqrt(u), t);
        } else {
            r = std::complex<double>(0.0, std::sqrt(-u));
        }
    } else {
        const std::complex<double> w(wr, z.imag());
        const std::complex<double> t = std::tan(w / 2.0);
        const std::complex<double> u = t * t * (1.0 - d2) - d2;
        r = std::sqrt(u);
        if (r.imag() < 0.0) r = -r;
    }
    std::complex<double> img = 2.0 * std::atan(r);
    if (img.imag() < 0.0) img = std::complex<double>(img.real(), 0.0);
    return {wrap_angle(x.value + img.real()), img.imag()};
}

}  // namespace chl
