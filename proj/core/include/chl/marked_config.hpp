#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "chl/run_record.hpp"
#include "chl/slit_map.hpp"
#include "chl/torus.hpp"

namespace chl {

struct UpdateEvent {
    enum class Kind { HitColor, NewColor };
    Kind kind = Kind::NewColor;
    int color = 0;
    TorusAngle position;
};

// Rigorous stopping residuals: once an interval of length len is observed,
// the chance that any future particle lands in the complement is at most
// (2pi - len) / (pi delta^2), by summing the per-step uniform contraction
// factor sqrt(1 - delta^2) as a geometric series.
struct DominationCertificate {
    int color = 0;
    double residual = 0.0;
    std::uint64_t step_index = 0;
};

// Colored tiling of the torus. Each color's interval is the hitting set of
// one tree; color 0 is the no-tree region. Stored as a circular list of
// half-open segments ordered by start angle; segments plus wraparound tile
// the torus exactly.
class MarkedConfiguration {
  public:
    struct Segment {
        double start = 0.0;
        int color = 0;
    };

    MarkedConfiguration();

    // One inverse-map update at slit position x. If x lies in a colored
    // segment all tiles map and the event is HitColor; if x lies in the
    // zero set the containing zero tile splits around the fresh slit arc
    // [x - a_delta, x + a_delta], which becomes the next color.
    UpdateEvent apply_particle(TorusAngle x, const SlitParams& p);

    double zero_mass() const;
    int num_colors() const { return next_color_ - 1; }
    // Unknown colors have the empty-interval convention (length 0).
    double color_length(int color) const;
    double max_color_length(int* color_out = nullptr) const;
    double total_length() const;
    int color_at(TorusAngle x) const;

    const std::vector<Segment>& segments() const { return segs_; }
    double segment_length(std::size_t i) const;

  private:
    std::vector<Segment> segs_;
    int next_color_ = 1;
};

std::optional<DominationCertificate> certify_domination(const MarkedConfiguration& m, int color,
                                                        double eta, const SlitParams& p,
                                                        std::uint64_t step_index = 0);

std::optional<DominationCertificate> certify_tree_completion(const MarkedConfiguration& m,
                                                             double eta, const SlitParams& p,
                                                             std::uint64_t step_index = 0);

struct TrackOptions {
    std::uint64_t cap = 100'000'000ULL;
};

// Runs the marked-configuration chain from the empty configuration until
// both the domination and the tree-completion certificates hold (or the cap
// is reached). Times are left NaN; the CHL driver fills them in.
RunRecord track_run(const SlitParams& p, double eta, std::uint64_t seed,
                    const TrackOptions& options = {});

struct DegreeSample {
    double hits = 0.0;
    bool certified = false;
    std::uint64_t steps = 0;
};

// Plants a tracked direct-attachment window of length `initial_length`
// (default 2 a_delta, one particle's window) at a uniform position, counts
// hits on it while it erodes under the hat inverse map, and stops once the
// remaining mass certifies at level eta. E[hits] = initial_length / (2 a_delta).
DegreeSample track_degree(const SlitParams& p, double eta, std::uint64_t seed,
                          double initial_length = 0.0, std::uint64_t cap = 100'000'000ULL);

struct StepsReplayRecord {
    std::uint64_t bound_steps = 0;  // particles consumed; upper bound on T_r
    int sessions = 0;               // restarts after an off-dominant hit
    bool certified = false;
    bool capped = false;
};

// Fidelity replay of the interval-probe procedure that certifies one-arm
// domination by repeatedly tracking a length-delta probe interval to the
// (delta^3, 2pi - delta^3) barriers. Search particles are counted in the
// bound.
StepsReplayRecord steps_replay(const SlitParams& p, double eta, std::uint64_t seed,
                               std::uint64_t cap = 100'000'000ULL);

}  // namespace chl
