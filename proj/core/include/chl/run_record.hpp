#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

namespace chl {

// Sampled image of one attached slit, used for rendering only.
struct Spine {
    int color = 0;
    double base = 0.0;  // attachment angle at insertion time
    std::vector<std::complex<double>> samples;
};

// Per-replicate outcome of a full marked-configuration / CHL run.
struct RunRecord {
    double delta = 0.0;
    double lambda = 0.0;
    double n_width = 0.0;
    double eta = 0.0;
    std::uint64_t seed = 0;

    std::uint64_t t_r_steps = 0;     // last step whose event missed the dominant color
    std::uint64_t t_tree_steps = 0;  // last step that created a new color
    double upsilon_time = std::numeric_limits<double>::quiet_NaN();
    double omega_time = std::numeric_limits<double>::quiet_NaN();

    int num_colors = 0;
    int dominant_color = 0;
    double domination_residual = std::numeric_limits<double>::infinity();
    double completion_residual = std::numeric_limits<double>::infinity();
    bool certified = false;

    std::uint64_t total_steps = 0;
    bool capped = false;

    std::vector<std::uint64_t> color_hits;  // index c = particles attached to tree c

    std::vector<Spine> spines;  // populated only when rendering was requested
};

}  // namespace chl
