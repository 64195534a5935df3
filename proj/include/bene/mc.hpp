#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bene/geometry.hpp"
#include "bene/rng.hpp"

namespace bene {

struct SimConfig {
    double h = 1e-2;          // macro time step
    double delta_geo = 1e-4;  // crossing-localization tolerance (length)
    long n_paths = 10000;
    uint64_t seed = 1;
    std::vector<double> checkpoints;  // strictly increasing, positive

    void validate() const;
};

struct PathOutcome {
    bool killed = false;
    double kill_time = 0;
    std::optional<Point> kill_location;
    std::vector<Point> snapshots;  // positions at checkpoints reached alive
    long cap_events = 0;           // refinement-cap hits (conservative kills)
};

struct SurvivalRow {
    double t = 0;
    long survivors = 0;
    long n = 0;
    double estimate() const { return n ? static_cast<double>(survivors) / n : 0.0; }
    double stderr_est() const;
};

struct SurvivalCurve {
    std::vector<SurvivalRow> rows;
    uint64_t config_hash = 0;
};

struct Survivor {
    long stream = 0;
    Point pos;
};

struct EnsembleResult {
    SurvivalCurve curve;
    // Surviving endpoints per checkpoint, ordered by stream id.
    std::vector<std::vector<Survivor>> survivors;
    long n_paths = 0;
    long cap_events = 0;
    uint64_t config_hash = 0;
};

// Probability that a Brownian bridge (unit diffusion, generator d^2/2) from a
// to b over duration h touches 0: 1 if a b <= 0, else exp(-2ab/h).
double bridge_zero_crossing_prob(double a, double b, double h);

struct StepResult {
    bool killed = false;
    double time_offset = 0;  // kill sub-time within the step, if killed
    Point position;          // endpoint if alive, kill location if killed
    long cap_events = 0;
};

// One macro step of killed Brownian motion: Gaussian endpoint draw, bridge
// crossing detection, bisection localization, hole-membership resolution.
StepResult advance_step(const BenedicksDomain& dom, const Point& position, double h,
                        double delta_geo, Rng& rng);

PathOutcome simulate_path(const BenedicksDomain& dom, const Point& x0, const SimConfig& cfg,
                          uint64_t stream_id);

// N independent paths over deterministic substreams [stream_lo, stream_hi).
// run_ensemble covers [0, n_paths); partial runs exist so split-and-merge can
// be tested against the pooled run.
EnsembleResult run_ensemble_range(const BenedicksDomain& dom, const Point& x0,
                                  const SimConfig& cfg, long stream_lo, long stream_hi);
EnsembleResult run_ensemble(const BenedicksDomain& dom, const Point& x0, const SimConfig& cfg);

// Sample-count-weighted merge of two partial ensembles of the same config.
// Associative, commutative, and identical to the pooled run.
EnsembleResult merge_ensembles(const EnsembleResult& a, const EnsembleResult& b);

uint64_t sim_config_hash(const BenedicksDomain& dom, const Point& x0, const SimConfig& cfg);

}  // namespace bene
