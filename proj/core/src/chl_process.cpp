#include "chl/chl_process.hpp"

#include <cmath>
#include <stdexcept>

#include "chl/rng.hpp"

namespace chl {

std::vector<ParticleEvent> sample_event_stream(const SlitParams& p, std::uint64_t count,
                                               std::uint64_t seed) {
    // Positions replay the exact stream a marked-configuration run with the
    // same seed consumes; times come from an independent derived stream.
    Rng positions(seed);
    Rng clocks(derive_seed(seed, 1));
    const double rate = kTwoPi * p.n_width;
    std::vector<ParticleEvent> events;
    events.reserve(count);
    double t = 0.0;
    for (std::uint64_t k = 1; k <= count; ++k) {
        const TorusAngle x = positions.uniform_angle();
        t += clocks.exponential(rate);
        events.push_back({k, x, t});
    }
    return events;
}

RunRecord simulate(const SlitParams& p, double eta, std::uint64_t seed,
                   const SimulateOptions& options) {
    if (eta <= 0.0 || eta >= 1.0) throw std::domain_error("simulate: eta in (0,1)");
    Rng positions(seed);
    Rng clocks(derive_seed(seed, 1));
    const double rate = kTwoPi * p.n_width;

    MarkedConfiguration m;
    RunRecord rec;
    rec.delta = p.delta;
    rec.lambda = p.lambda;
    rec.n_width = p.n_width;
    rec.eta = eta;
    rec.seed = seed;

    std::vector<int> event_colors;
    std::vector<double> event_times;
    double t = 0.0;
    std::uint64_t j = 0;
    while (j < options.cap) {
        ++j;
        const TorusAngle x = positions.uniform_angle();
        t += clocks.exponential(rate);
        const UpdateEvent ev = m.apply_particle(x, p);
        event_colors.push_back(ev.color);
        event_times.push_back(t);
        if (ev.kind == UpdateEvent::Kind::NewColor) rec.t_tree_steps = j;

        if (options.render && j <= options.max_render_particles) {
            for (auto& spine : rec.spines) {
                for (auto& z : spine.samples) z = forward_map(z, x, p);
            }
            Spine spine;
            spine.color = ev.color;
            spine.base = x.value;
            // Sample 0 is the attachment point itself; it rides along the
            // boundary under later maps.
            spine.samples.reserve(static_cast<std::size_t>(options.samples_per_slit) + 1);
            for (int s = 0; s <= options.samples_per_slit; ++s) {
                spine.samples.emplace_back(
                    x.value, p.slit_height * static_cast<double>(s) /
                                 static_cast<double>(options.samples_per_slit));
            }
            rec.spines.push_back(std::move(spine));
        }

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
    for (int c : event_colors) rec.color_hits[static_cast<std::size_t>(c)]++;
    if (rec.certified) {
        for (std::size_t i = event_colors.size(); i-- > 0;) {
            if (event_colors[i] != rec.dominant_color) {
                rec.t_r_steps = i + 1;
                break;
            }
        }
        if (rec.t_r_steps > 0) rec.upsilon_time = event_times[rec.t_r_steps - 1];
        if (rec.t_tree_steps > 0) rec.omega_time = event_times[rec.t_tree_steps - 1];
    }
    return rec;
}

}  // namespace chl
