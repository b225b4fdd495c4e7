#include "chl/marked_config.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chl/rng.hpp"

namespace chl {

MarkedConfiguration::MarkedConfiguration() { segs_.push_back({0.0, 0}); }

double MarkedConfiguration::segment_length(std::size_t i) const {
    const std::size_t n = segs_.size();
    if (i + 1 < n) return segs_[i + 1].start - segs_[i].start;
    return kTwoPi - segs_[n - 1].start + segs_[0].start;
}

int MarkedConfiguration::color_at(TorusAngle x) const {
    // Last segment with start <= x; wraps to the final segment below the
    // first start. Equal starts mean empty tiles; the last of the group owns
    // the point.
    const auto it = std::upper_bound(segs_.begin(), segs_.end(), x.value,
                                     [](double v, const Segment& s) { return v < s.start; });
    if (it == segs_.begin()) return segs_.back().color;
    return std::prev(it)->color;
}

UpdateEvent MarkedConfiguration::apply_particle(TorusAngle x, const SlitParams& p) {
    UpdateEvent ev;
    ev.position = x;
    const int c = color_at(x);
    for (auto& s : segs_) {
        s.start = endpoint_image(TorusAngle(s.start), x, p).value;
    }
    if (c == 0) {
        ev.kind = UpdateEvent::Kind::NewColor;
        ev.color = next_color_++;
        segs_.push_back({wrap_angle(x.value - p.a_delta), ev.color});
        segs_.push_back({wrap_angle(x.value + p.a_delta), 0});
    } else {
        ev.kind = UpdateEvent::Kind::HitColor;
        ev.color = c;
    }
    // The map preserves circular order; ascending start order is its
    // canonical rotation. stable_sort keeps freshly inserted tiles after
    // coincident old breakpoints.
    std::stable_sort(segs_.begin(), segs_.end(),
                     [](const Segment& a, const Segment& b) { return a.start < b.start; });
    return ev;
}

double MarkedConfiguration::zero_mass() const {
    double total = 0.0;
    for (std::size_t i = 0; i < segs_.size(); ++i) {
        if (segs_[i].color == 0) total += segment_length(i);
    }
    return total;
}

double MarkedConfiguration::color_length(int color) const {
    double total = 0.0;
    for (std::size_t i = 0; i < segs_.size(); ++i) {
        if (segs_[i].color == color) total += segment_length(i);
    }
    return total;
}

double MarkedConfiguration::max_color_length(int* color_out) const {
    double best = 0.0;
    int best_color = 0;
    for (std::size_t i = 0; i < segs_.size(); ++i) {
        if (segs_[i].color == 0) continue;
        const double len = segment_length(i);
        if (len > best) {
            best = len;
            best_color = segs_[i].color;
        }
    }
    if (color_out) *color_out = best_color;
    return best;
}

double MarkedConfiguration::total_length() const {
    double total = 0.0;
    for (std::size_t i = 0; i < segs_.size(); ++i) total += segment_length(i);
    return total;
}

namespace {

double stopping_residual(double uncovered, const SlitParams& p) {
    return uncovered / (kPi * p.delta * p.delta);
}

}  // namespace

std::optional<DominationCertificate> certify_domination(const MarkedConfiguration& m, int color,
                                                        double eta, const SlitParams& p,
                                                        std::uint64_t step_index) {
    if (eta <= 0.0 || eta >= 1.0) throw std::domain_error("certify_domination: eta in (0,1)");
    const double residual = stopping_residual(kTwoPi - m.color_length(color), p);
    if (residual > eta) return std::nullopt;
    return DominationCertificate{color, residual, step_index};
}

std::optional<DominationCertificate> certify_tree_completion(const MarkedConfiguration& m,
                                                             double eta, const SlitParams& p,
                                                             std::uint64_t step_index) {
    if (eta <= 0.0 || eta >= 1.0) throw std::domain_error("certify_tree_completion: eta in (0,1)");
    const double residual = stopping_residual(m.zero_mass(), p);
    if (residual > eta) return std::nullopt;
    return DominationCertificate{0, residual, step_index};
}

RunRecord track_run(const SlitParams& p, double eta, std::uint64_t seed,
                    const TrackOptions& options) {
    if (eta <= 0.0 || eta >= 1.0) throw std::domain_error("track_run: eta in (0,1)");
    Rng rng(seed);
    MarkedConfiguration m;
    RunRecord rec;
    rec.delta = p.delta;
    rec.lambda = p.lambda;
    rec.n_width = p.n_width;
    rec.eta = eta;
    rec.seed = seed;

    std::vector<int> event_colors;
    event_colors.reserve(4096);
    std::uint64_t j = 0;
    while (j < options.cap) {
        ++j;
        const UpdateEvent ev = m.apply_particle(rng.uniform_angle(), p);
        event_colors.push_back(ev.color);
        if (ev.kind == UpdateEvent::Kind::NewColor) rec.t_tree_steps = j;

        const auto completion = certify_tree_completion(m, eta, p, j);
        if (!completion) continue;
        int top = 0;
        m.max_color_length(&top);
        const auto domination = certify_domination(m, top, eta, p, j);
        if (!domination) continue;

        rec.certified = true;
        rec.dominant_color = top;
        rec.domination_residual = domination->residual;
        rec.completion_residual = completion->residual;
        break;
    }
    rec.total_steps = j;
    rec.capped = !rec.certified;
    rec.num_colors = m.num_colors();
    rec.color_hits.assign(static_cast<std::size_t>(m.num_colors()) + 1, 0);
    for (std::size_t i = 0; i < event_colors.size(); ++i) {
        rec.color_hits[static_cast<std::size_t>(event_colors[i])]++;
    }
    if (rec.certified) {
        for (std::size_t i = event_colors.size(); i-- > 0;) {
            if (event_colors[i] != rec.dominant_color) {
                rec.t_r_steps = i + 1;
                break;
            }
        }
    }
    return rec;
}

DegreeSample track_degree(const SlitParams& p, double eta, std::uint64_t seed,
                          double initial_length, std::uint64_t cap) {
    if (eta <= 0.0 || eta >= 1.0) throw std::domain_error("track_degree: eta in (0,1)");
    if (initial_length <= 0.0) initial_length = 2.0 * p.a_delta;
    if (initial_length >= kTwoPi) throw std::domain_error("track_degree: window too long");
    Rng rng(seed);
    std::vector<TorusInterval> pieces{TorusInterval(rng.uniform_angle(), initial_length)};
    std::vector<TorusInterval> next;
    const double threshold = eta * kPi * p.delta * p.delta;
    DegreeSample sample;
    while (sample.steps < cap) {
        double mass = 0.0;
        for (const auto& piece : pieces) mass += piece.length;
        if (mass <= threshold) {
            sample.certified = true;
            return sample;
        }
        ++sample.steps;
        const TorusAngle x = rng.uniform_angle();
        next.clear();
        bool hit = false;
        for (const auto& piece : pieces) {
            if (!hit && piece.contains(x)) {
                hit = true;
                // Hat map: the particle occludes its own slit arc, so the
                // piece splits with (x - a_delta, x + a_delta) excised.
                const double d_u = signed_angle(piece.start.value - x.value);
                const double d_v = signed_angle(piece.start.value + piece.length - x.value);
                const double left_len = -p.a_delta - (d_u + broadened_shift(d_u, p));
                const double right_len = (d_v + broadened_shift(d_v, p)) - p.a_delta;
                if (left_len > 0.0) {
                    next.emplace_back(TorusAngle(x.value + d_u + broadened_shift(d_u, p)), left_len);
                }
                if (right_len > 0.0) {
                    next.emplace_back(TorusAngle(x.value + p.a_delta), right_len);
                }
            } else {
                const TorusInterval img = interval_inverse(piece, x, p);
                if (!img.is_empty()) next.push_back(img);
            }
        }
        if (hit) sample.hits += 1.0;
        pieces.swap(next);
    }
    return sample;  // capped, uncertified
}

StepsReplayRecord steps_replay(const SlitParams& p, double eta, std::uint64_t seed,
                               std::uint64_t cap) {
    Rng rng(seed);
    MarkedConfiguration m;
    StepsReplayRecord rec;
    const double d3 = p.delta * p.delta * p.delta;
    const double low = d3;
    const double high = kTwoPi - d3;

    UpdateEvent ev = m.apply_particle(rng.uniform_angle(), p);
    std::uint64_t consumed = 1;
    int grow = ev.color;

    const auto probe_start = [&](int color) -> TorusAngle {
        for (std::size_t i = 0; i < m.segments().size(); ++i) {
            if (m.segments()[i].color == color && m.segment_length(i) >= p.delta) {
                return TorusAngle(m.segments()[i].start);
            }
        }
        throw std::logic_error("steps_replay: growing color shorter than delta");
    };

    while (consumed < cap) {
        TorusInterval probe(probe_start(grow), p.delta);
        bool high_exit = false;
        while (consumed < cap) {
            const TorusAngle x = rng.uniform_angle();
            ev = m.apply_particle(x, p);
            probe = interval_inverse(probe, x, p);
            ++consumed;
            if (probe.length < low) {
                grow = ev.color;
                break;
            }
            if (probe.length > high) {
                high_exit = true;
                break;
            }
        }
        if (!high_exit) continue;
        const int dominant = grow;
        bool found_off = false;
        while (consumed < cap) {
            if (stopping_residual(kTwoPi - m.color_length(dominant), p) <= eta) {
                rec.bound_steps = consumed;
                rec.certified = true;
                return rec;
            }
            ev = m.apply_particle(rng.uniform_angle(), p);
            ++consumed;
            if (ev.color != dominant) {
                found_off = true;
                grow = ev.color;
                break;
            }
        }
        if (found_off) ++rec.sessions;
    }
    rec.bound_steps = consumed;
    rec.capped = true;
    return rec;
}

}  // namespace chl
