#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "chl/rng.hpp"
#include "chl/slit_map.hpp"

using namespace chl;

namespace {

// Reference boundary inverse evaluated naively from the closed form; the
// library uses cancellation-free rearrangements, so agreement here is a
// genuine cross-check.
double naive_inverse_signed(double theta_signed, double delta) {
    const double t = std::tan(theta_signed / 2.0);
    const double s = t >= 0.0 ? 1.0 : -1.0;
    return 2.0 * std::atan(s * std::sqrt((t * t + delta * delta) / (1.0 - delta * delta)));
}

}  // namespace

TEST_CASE("parameter bundle identities") {
    const SlitParams p = make_params(1.0, 10.0);
    // Frozen 50-digit evaluations of the closed forms.
    CHECK(p.delta == doctest::Approx(0.049958374957879972198).epsilon(1e-15));
    CHECK(p.a_delta == doctest::Approx(0.099958359356103686273).epsilon(1e-15));
    CHECK(p.slit_height == doctest::Approx(0.1).epsilon(1e-14));
    // delta = 1 - 2/(1 + e^{lambda/N}) to machine precision
    CHECK(p.delta ==
          doctest::Approx(1.0 - 2.0 / (1.0 + std::exp(p.lambda / p.n_width))).epsilon(1e-16));
    CHECK(p.delta == doctest::Approx(std::tanh(p.lambda / (2.0 * p.n_width))).epsilon(1e-16));

    const SlitParams q = make_params_from_delta(0.3);
    CHECK(q.delta == 0.3);
    CHECK(q.lambda / q.n_width == doctest::Approx(2.0 * std::atanh(0.3)).epsilon(1e-15));
    CHECK(q.a_delta == doctest::Approx(2.0 * std::asin(0.3)).epsilon(1e-15));

    CHECK_THROWS_AS(make_params(-1.0, 10.0), std::domain_error);
    CHECK_THROWS_AS(make_params(1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(make_params_from_delta(1.0), std::domain_error);
    CHECK_THROWS_AS(make_params_from_delta(0.0), std::domain_error);
}

TEST_CASE("point shift matches frozen high-precision values") {
    // mpmath (50 digits): l(x) = S0inv(x) - x in signed coordinates.
    const struct {
        double delta, x, l;
    } cases[] = {
        {0.3, 0.1, 0.51728357494129896134},
        {0.3, 0.5, 0.28328401099072640437},
        {0.3, 1.0, 0.15745106805770477154},
        {0.3, 2.0, 0.058607650247405128523},
        {0.3, 3.0, 0.0065320438918815788914},
        {0.3, 4.0, -0.041961771025962829274},
        {0.3, 6.0, -0.38692210346903202076},
        {0.05, 0.1, 0.04142136116593759866},
        {0.05, 0.5, 0.0097047468242003406718},
        {0.05, 1.0, 0.0045695315727982081897},
        {0.05, 2.0, 0.0016058223026752846817},
        {0.05, 3.0, 0.00017739749623555310985},
        {0.05, 4.0, -0.0011447100094410193069},
        {0.05, 6.0, -0.017040071415602295419},
    };
    for (const auto& c : cases) {
        const SlitParams p = make_params_from_delta(c.delta);
        CHECK(point_shift(TorusAngle(c.x), p) == doctest::Approx(c.l).epsilon(1e-13));
    }
}

TEST_CASE("shift is odd, positive on (0,pi), zero at pi") {
    const SlitParams p = make_params_from_delta(0.2);
    for (double x : {0.05, 0.7, 1.5, 2.9, 3.1}) {
        const double l = point_shift(TorusAngle(x), p);
        CHECK(l > 0.0);
        CHECK(point_shift(TorusAngle(kTwoPi - x), p) == doctest::Approx(-l).epsilon(1e-12));
    }
    CHECK(point_shift(TorusAngle(kPi), p) == doctest::Approx(0.0));
    CHECK_THROWS_AS(point_shift(TorusAngle(0.0), p), std::domain_error);
}

TEST_CASE("inverse boundary agrees with the naive closed form") {
    const SlitParams p = make_params_from_delta(0.1);
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (int i = 0; i < 2000; ++i) {
        const double theta = u(gen);
        if (std::abs(theta) < 1e-12) continue;
        const auto got = inverse_boundary_signed(theta, p);
        REQUIRE(got.has_value());
        CHECK(*got == doctest::Approx(naive_inverse_signed(theta, p.delta)).epsilon(1e-11));
    }
    CHECK(!inverse_boundary_signed(0.0, p).has_value());
}

TEST_CASE("inverse boundary avoids overflow near pi") {
    const SlitParams p = make_params_from_delta(0.05);
    const double theta = kPi - 1e-14;
    const auto v = inverse_boundary_signed(theta, p);
    REQUIRE(v.has_value());
    CHECK(std::isfinite(*v));
    CHECK(*v <= kPi);
    CHECK(*v >= theta);  // shift is nonnegative on (0, pi]
}

TEST_CASE("derivative matches central finite differences") {
    const SlitParams p = make_params_from_delta(0.15);
    for (double x : {0.01, 0.3, 1.0, 2.0, 3.0, 3.3, 5.0, 6.2}) {
        const double h = 1e-6;
        const auto hi = inverse_boundary_signed(signed_angle(x + h), p);
        const auto lo = inverse_boundary_signed(signed_angle(x - h), p);
        REQUIRE(hi.has_value());
        REQUIRE(lo.has_value());
        const double fd = signed_angle(*hi - *lo) / (2.0 * h);
        CHECK(inverse_derivative(TorusAngle(x), p) == doctest::Approx(fd).epsilon(1e-6));
    }
    CHECK_THROWS_AS(inverse_derivative(TorusAngle(0.0), p), std::domain_error);
}

TEST_CASE("derivative range (0, sqrt(1-delta^2)]") {
    const SlitParams p = make_params_from_delta(0.4);
    const double cap = std::sqrt(1.0 - 0.4 * 0.4);
    for (double x = 0.01; x < kTwoPi; x += 0.05) {
        const double d = inverse_derivative(TorusAngle(x), p);
        CHECK(d > 0.0);
        CHECK(d <= cap + 1e-15);
    }
    // Supremum attained at pi.
    CHECK(inverse_derivative(TorusAngle(kPi), p) == doctest::Approx(cap).epsilon(1e-14));
}

TEST_CASE("broadened endpoint convention at the slit base") {
    const SlitParams p = make_params_from_delta(0.2);
    // d == 0 maps to the left end of the inserted arc.
    CHECK(broadened_shift(0.0, p) == doctest::Approx(-p.a_delta));
    // Just right of the base: image just right of +a_delta.
    CHECK(broadened_shift(1e-12, p) + 1e-12 >= p.a_delta);
    // Just left (signed negative): image at -a_delta or just left of it
    // (up to one rounding step).
    CHECK(broadened_shift(-1e-12, p) - 1e-12 <= -p.a_delta + 1e-15);
}

TEST_CASE("interval inverse contracts misses and broadens hits") {
    const SlitParams p = make_params_from_delta(0.1);
    const double contraction = std::sqrt(1.0 - p.delta * p.delta);
    const TorusInterval i(TorusAngle(1.0), 0.5);

    // Slit far away: contraction by at most sqrt(1-delta^2), and nonzero.
    const TorusInterval miss = interval_inverse(i, TorusAngle(4.0), p);
    CHECK(miss.length < i.length);
    CHECK(miss.length >= i.length * contraction * 0.9);

    // Slit inside: image contains [x - a_delta, x + a_delta].
    const TorusAngle x(1.2);
    const TorusInterval hit = interval_inverse(i, x, p);
    CHECK(hit.length >= 2.0 * p.a_delta);
    CHECK(hit.contains(TorusAngle(x.value - p.a_delta)));
    CHECK(hit.contains(TorusAngle(x.value + p.a_delta * 0.999)));

    // Full torus maps to itself.
    CHECK(interval_inverse(TorusInterval::full(), x, p).is_full());
    // Empty stays empty.
    CHECK(interval_inverse(TorusInterval(TorusAngle(2.0), 0.0), x, p).is_empty());
}

TEST_CASE("martingale consistency of interval_shift") {
    // new_length(a, x) must equal the length of interval_inverse on the
    // canonical interval for x away from endpoints.
    const SlitParams p = make_params_from_delta(0.25);
    const double a = 2.0;
    for (double x : {0.4, 1.0, 1.9, 2.5, 4.0, 6.0}) {
        const TorusInterval img = interval_inverse({TorusAngle(0.0), a}, TorusAngle(x), p);
        CHECK(a + interval_shift(a, TorusAngle(x), p) == doctest::Approx(img.length).epsilon(1e-12));
    }
}

TEST_CASE("random partitions keep tiling under the broadened inverse") {
    // Property test: starts map in order, lengths stay nonnegative and sum
    // to 2pi exactly.
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    for (int trial = 0; trial < 300; ++trial) {
        const SlitParams p = make_params_from_delta(0.05 + 0.4 * u(gen) / kTwoPi);
        std::vector<double> starts(8);
        for (auto& s : starts) s = u(gen);
        std::sort(starts.begin(), starts.end());
        const TorusAngle x(u(gen));
        std::vector<double> images;
        for (double s : starts) images.push_back(endpoint_image(TorusAngle(s), x, p).value);
        // Circular order is preserved: rotating so the minimum comes first
        // must give a sorted sequence.
        const auto mn = std::min_element(images.begin(), images.end());
        std::vector<double> rot(mn, images.end());
        rot.insert(rot.end(), images.begin(), mn);
        CHECK(std::is_sorted(rot.begin(), rot.end()));
        // Consecutive gaps sum to 2pi by telescoping.
        double total = 0.0;
        for (std::size_t k = 0; k + 1 < rot.size(); ++k) total += rot[k + 1] - rot[k];
        total += kTwoPi - rot.back() + rot.front();
        CHECK(total == doctest::Approx(kTwoPi).epsilon(1e-12));
    }
}

TEST_CASE("forward map inverts the boundary inverse on the real locus") {
    const SlitParams p = make_params_from_delta(0.2);
    for (double theta : {0.3, 1.0, 2.2, 3.0, 3.5, 5.0}) {
        const auto inv = inverse_boundary(TorusAngle(theta), p);
        REQUIRE(inv.has_value());
        const std::complex<double> back = forward_map({inv->value, 0.0}, TorusAngle(0.0), p);
        CHECK(back.imag() == doctest::Approx(0.0).epsilon(1e-10));
        CHECK(wrap_angle(back.real()) == doctest::Approx(theta).epsilon(1e-10));
    }
}

TEST_CASE("forward map sends the slit base arc onto the slit") {
    const SlitParams p = make_params_from_delta(0.3);
    const TorusAngle x(2.0);
    // Points of (x - a_delta, x + a_delta) land on the vertical slit.
    for (double f : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
        const std::complex<double> z{x.value + f * p.a_delta, 0.0};
        const std::complex<double> w = forward_map(z, x, p);
        CHECK(wrap_angle(w.real()) == doctest::Approx(x.value).epsilon(1e-9));
        CHECK(w.imag() >= -1e-12);
        CHECK(w.imag() <= p.slit_height + 1e-9);
    }
    // The base endpoints reach the slit tip... the midpoint does:
    const std::complex<double> tip = forward_map({x.value, 0.0}, x, p);
    CHECK(tip.imag() == doctest::Approx(p.slit_height).epsilon(1e-9));
}

TEST_CASE("forward map keeps the upper half-plane and rejects the lower") {
    const SlitParams p = make_params_from_delta(0.2);
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    std::uniform_real_distribution<double> v(0.0, 3.0);
    for (int i = 0; i < 500; ++i) {
        const std::complex<double> w = forward_map({u(gen), v(gen)}, TorusAngle(u(gen)), p);
        CHECK(w.imag() >= -1e-12);
    }
    CHECK_THROWS_AS(forward_map({1.0, -0.1}, TorusAngle(0.0), p), std::domain_error);
}
