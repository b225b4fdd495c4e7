#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chl/marked_config.hpp"
#include "chl/run_record.hpp"
#include "chl/slit_map.hpp"

namespace chl {

// One Poisson arrival on the unrescaled cylinder: uniform position, arrival
// time with E[t_k] = k / (2 pi N).
struct ParticleEvent {
    std::uint64_t index = 0;
    TorusAngle position;
    double time = 0.0;
};

// Positions i.i.d. uniform, inter-arrival times i.i.d. Exp(2 pi N),
// independent of positions. The position stream equals the one a
// marked-configuration run with the same seed consumes.
std::vector<ParticleEvent> sample_event_stream(const SlitParams& p, std::uint64_t count,
                                               std::uint64_t seed);

struct SimulateOptions {
    std::uint64_t cap = 100'000'000ULL;
    bool render = false;
    int samples_per_slit = 16;  // spine sampling density
    std::uint64_t max_render_particles = 5000;
};

// Full CHL run: drives the marked-configuration chain with the event
// stream, converts the observed step indices to Poisson times, and (when
// rendering) accumulates slit spines under the backward composition.
RunRecord simulate(const SlitParams& p, double eta, std::uint64_t seed,
                   const SimulateOptions& options = {});

// Writes an SVG cluster picture: one polyline per spine, colored by tree,
// the cylinder drawn as a [0, 2pi) strip. Deterministic for a fixed record.
// Throws std::runtime_error with path context on I/O failure.
void render_svg(const RunRecord& record, const std::string& out_path);

}  // namespace chl
