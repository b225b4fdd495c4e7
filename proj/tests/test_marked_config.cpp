#include <doctest.h>

#include <cmath>

#include "chl/marked_config.hpp"
#include "chl/rng.hpp"

using namespace chl;

TEST_CASE("initial configuration is all zero") {
    MarkedConfiguration m;
    CHECK(m.zero_mass() == doctest::Approx(kTwoPi));
    CHECK(m.num_colors() == 0);
    CHECK(m.color_at(TorusAngle(1.0)) == 0);
    CHECK(m.total_length() == doctest::Approx(kTwoPi));
}

TEST_CASE("first particle creates color 1 with the slit arc") {
    const SlitParams p = make_params_from_delta(0.3);
    MarkedConfiguration m;
    const auto ev = m.apply_particle(TorusAngle(2.0), p);
    CHECK(ev.kind == UpdateEvent::Kind::NewColor);
    CHECK(ev.color == 1);
    CHECK(m.num_colors() == 1);
    CHECK(m.color_length(1) == doctest::Approx(2.0 * p.a_delta).epsilon(1e-12));
    CHECK(m.zero_mass() == doctest::Approx(kTwoPi - 2.0 * p.a_delta).epsilon(1e-12));
    CHECK(m.color_at(TorusAngle(2.0)) == 1);
    CHECK(m.color_at(TorusAngle(2.0 - p.a_delta * 0.99)) == 1);
    CHECK(m.color_at(TorusAngle(2.0 + p.a_delta * 1.01)) == 0);
}

TEST_CASE("hit on an existing color broadens it") {
    const SlitParams p = make_params_from_delta(0.3);
    MarkedConfiguration m;
    m.apply_particle(TorusAngle(2.0), p);
    const double before = m.color_length(1);
    const auto ev = m.apply_particle(TorusAngle(2.0), p);
    CHECK(ev.kind == UpdateEvent::Kind::HitColor);
    CHECK(ev.color == 1);
    CHECK(m.num_colors() == 1);
    CHECK(m.color_length(1) > before);
    CHECK(m.color_length(1) >= 2.0 * p.a_delta);
}

TEST_CASE("tiling invariants hold along a long run") {
    const SlitParams p = make_params_from_delta(0.15);
    const double contraction = std::sqrt(1.0 - p.delta * p.delta);
    MarkedConfiguration m;
    Rng rng(31);
    double prev_zero = m.zero_mass();
    for (int k = 0; k < 3000; ++k) {
        const auto ev = m.apply_particle(rng.uniform_angle(), p);
        CHECK(m.total_length() == doctest::Approx(kTwoPi).epsilon(1e-12));
        const auto& segs = m.segments();
        for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
            CHECK(segs[i].start <= segs[i + 1].start);
        }
        // Zero mass never grows; a new color removes exactly its slit arc
        // from the zero set first.
        const double z = m.zero_mass();
        if (ev.kind == UpdateEvent::Kind::HitColor) {
            // The slit lies in a colored arc, so every zero arc maps with
            // derivative <= sqrt(1 - delta^2): contraction never violated.
            CHECK(z <= prev_zero * contraction + 1e-12);
        } else {
            CHECK(z <= prev_zero + 1e-12);
        }
        prev_zero = z;
        // color_at is consistent with per-color masses.
        double recomputed = 0.0;
        for (int c = 1; c <= m.num_colors(); ++c) recomputed += m.color_length(c);
        CHECK(recomputed + z == doctest::Approx(kTwoPi).epsilon(1e-10));
    }
}

TEST_CASE("certificates trigger exactly at the residual threshold") {
    const SlitParams p = make_params_from_delta(0.3);
    MarkedConfiguration m;
    const double full_residual = kTwoPi / (kPi * p.delta * p.delta);
    CHECK(!certify_tree_completion(m, 0.5, p).has_value());
    // A configuration dominated by one color certifies once the residual is
    // below eta.
    Rng rng(5);
    std::uint64_t k = 0;
    while (true) {
        ++k;
        m.apply_particle(rng.uniform_angle(), p);
        const auto c = certify_tree_completion(m, 1e-3, p, k);
        if (c) {
            CHECK(c->residual <= 1e-3);
            CHECK(c->residual == doctest::Approx(m.zero_mass() / (kPi * p.delta * p.delta)));
            CHECK(c->step_index == k);
            break;
        }
        CHECK(m.zero_mass() / (kPi * p.delta * p.delta) > 1e-3);
        REQUIRE(k < 100000);
    }
    CHECK(full_residual > 1.0);
    CHECK_THROWS_AS(certify_domination(m, 1, 0.0, p), std::domain_error);
    CHECK_THROWS_AS(certify_tree_completion(m, 1.0, p), std::domain_error);
}

TEST_CASE("track_run is deterministic and certified") {
    const SlitParams p = make_params_from_delta(0.4);
    const RunRecord a = track_run(p, 1e-3, 2024);
    const RunRecord b = track_run(p, 1e-3, 2024);
    CHECK(a.total_steps == b.total_steps);
    CHECK(a.t_r_steps == b.t_r_steps);
    CHECK(a.t_tree_steps == b.t_tree_steps);
    CHECK(a.num_colors == b.num_colors);
    CHECK(a.certified);
    CHECK(!a.capped);
    CHECK(a.domination_residual <= 1e-3);
    CHECK(a.completion_residual <= 1e-3);
    CHECK(a.t_r_steps <= a.total_steps);
    CHECK(a.t_tree_steps <= a.total_steps);
    CHECK(a.num_colors >= 1);
    CHECK(a.dominant_color >= 1);
    CHECK(a.dominant_color <= a.num_colors);
    // Hit histogram accounts for every particle.
    std::uint64_t total = 0;
    for (auto h : a.color_hits) total += h;
    CHECK(total == a.total_steps);
}

TEST_CASE("track_run honors the cap") {
    const SlitParams p = make_params_from_delta(0.05);
    const RunRecord rec = track_run(p, 1e-6, 1, {50});
    CHECK(rec.capped);
    CHECK(!rec.certified);
    CHECK(rec.total_steps == 50);
}

TEST_CASE("degree erosion: window of one particle averages one hit") {
    const SlitParams p = make_params_from_delta(0.2);
    double hits = 0.0;
    const int n = 4000;
    for (int r = 0; r < n; ++r) {
        const DegreeSample s = track_degree(p, 1e-3, derive_seed(12, r));
        CHECK(s.certified);
        hits += s.hits;
    }
    const double mean = hits / n;
    CHECK(mean == doctest::Approx(1.0).epsilon(0.08));
}

TEST_CASE("degree scales linearly in the window length") {
    const SlitParams p = make_params_from_delta(0.2);
    const double window = 6.0 * p.a_delta;
    double hits = 0.0;
    const int n = 3000;
    for (int r = 0; r < n; ++r) {
        hits += track_degree(p, 1e-3, derive_seed(13, r), window).hits;
    }
    CHECK(hits / n == doctest::Approx(3.0).epsilon(0.1));
}

TEST_CASE("steps replay certifies and upper-bounds the direct observation") {
    const SlitParams p = make_params_from_delta(0.3);
    const StepsReplayRecord rep = steps_replay(p, 1e-3, 321);
    CHECK(rep.certified);
    CHECK(!rep.capped);
    CHECK(rep.bound_steps >= 1);
}
