#include "bene/mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace bene {

namespace {
constexpr int kRefinementCap = 64;

void hash_double(uint64_t& h, double v) { h = fnv1a(&v, sizeof v, h); }

// Nearest hole point to a hyperplane location, for the conservative cap-kill
// bookkeeping only.
std::vector<double> nearest_hole_point(const BenedicksDomain& dom, std::span<const double> xi) {
    std::vector<double> out(xi.begin(), xi.end());
    if (dom.in_holes(xi)) return out;
    if (dom.holes().variant == HoleVariant::FiniteHoles) {
        double best = -1;
        std::vector<double> cand(xi.size());
        for (const Box& b : dom.holes().boxes) {
            for (size_t k = 0; k < xi.size(); ++k)
                cand[k] = std::clamp(xi[k], b.lo[k], b.hi[k]);
            double dsq = 0;
            for (size_t k = 0; k < xi.size(); ++k)
                dsq += (cand[k] - xi[k]) * (cand[k] - xi[k]);
            if (best < 0 || dsq < best) {
                best = dsq;
                out = cand;
            }
        }
        return out;
    }
    // Windows variant: snap to the nearest face of the tightest containing
    // window (a hole-boundary point).
    double best = -1;
    for (const Box& b : dom.holes().boxes) {
        if (!b.contains_open(xi)) continue;
        for (size_t k = 0; k < xi.size(); ++k) {
            for (double face : {b.lo[k], b.hi[k]}) {
                double dist = std::abs(xi[k] - face);
                if (best < 0 || dist < best) {
                    best = dist;
                    out.assign(xi.begin(), xi.end());
                    out[k] = face;
                }
            }
        }
    }
    return out;
}

struct Located {
    double tau;  // absolute time of the crossing within [0, h]
    Point zeta;  // on the hyperplane, zeta_d = 0
    bool capped = false;
};

// Bisect the segment (pa @ ta) -> (pb @ tb), conditioned to cross the
// hyperplane, down to duration delta^2 (lateral displacement scale delta).
Located locate_crossing(Point pa, double ta, Point pb, double tb, double delta, Rng& rng,
                        int& budget) {
    const int d = pa.dim();
    while (true) {
        // The fp guard stops bisection once ta and tb are adjacent doubles.
        if (tb - ta <= delta * delta || tb - ta <= 4e-16 * std::max(1.0, tb)) {
            Point zeta(std::vector<double>(d, 0.0));
            for (int k = 0; k < d - 1; ++k) zeta.c[k] = 0.5 * (pa.c[k] + pb.c[k]);
            return {0.5 * (ta + tb), zeta, false};
        }
        if (--budget < 0) {
            Point zeta = pa;
            zeta.xd() = 0.0;
            return {ta, zeta, true};
        }
        const double dt = tb - ta;
        const double sd = std::sqrt(0.25 * dt);
        Point m(std::vector<double>(d, 0.0));
        for (int k = 0; k < d; ++k) m.c[k] = 0.5 * (pa.c[k] + pb.c[k]) + sd * rng.gaussian();
        const double p1 = bridge_zero_crossing_prob(pa.xd(), m.xd(), 0.5 * dt);
        const double p2 = bridge_zero_crossing_prob(m.xd(), pb.xd(), 0.5 * dt);
        const double denom = p1 + (1.0 - p1) * p2;
        const double p_left = denom > 0 ? p1 / denom : 1.0;
        if (rng.uniform() < p_left) {
            pb = m;
            tb = ta + 0.5 * dt;
        } else {
            pa = m;
            ta = ta + 0.5 * dt;
        }
    }
}

}  // namespace

void SimConfig::validate() const {
    if (!(h > 0)) throw std::invalid_argument("macro step h must be positive");
    if (!(delta_geo > 0)) throw std::invalid_argument("delta_geo must be positive");
    if (n_paths < 1) throw std::invalid_argument("ensemble size must be >= 1");
    double prev = 0;
    for (double t : checkpoints) {
        if (!(t > prev)) throw std::invalid_argument("checkpoints must be strictly increasing and positive");
        prev = t;
    }
}

double SurvivalRow::stderr_est() const {
    if (n == 0) return 0;
    double p = estimate();
    return std::sqrt(p * (1.0 - p) / n);
}

double bridge_zero_crossing_prob(double a, double b, double h) {
    if (!(h > 0)) throw std::domain_error("bridge duration must be positive");
    if (a * b <= 0) return 1.0;
    return std::exp(-2.0 * a * b / h);
}

StepResult advance_step(const BenedicksDomain& dom, const Point& position, double h,
                        double delta_geo, Rng& rng) {
    const int d = dom.dim();
    const double sh = std::sqrt(h);
    Point b = position;
    for (int k = 0; k < d; ++k) b.c[k] += sh * rng.gaussian();

    StepResult res;
    int budget = kRefinementCap;
    Point cur = position;
    double tcur = 0;
    while (true) {
        const double dt = h - tcur;
        if (dt <= 0) break;
        const double p = bridge_zero_crossing_prob(cur.xd(), b.xd(), dt);
        if (cur.xd() * b.xd() > 0 && rng.uniform() >= p) break;  // no crossing left
        if (--budget < 0) {
            res.killed = true;
            res.time_offset = tcur;
            res.position = cur;
            res.position.xd() = 0;
            std::vector<double> hole = nearest_hole_point(dom, res.position.xvec());
            std::copy(hole.begin(), hole.end(), res.position.c.begin());
            res.cap_events++;
            return res;
        }
        Located loc = locate_crossing(cur, tcur, b, h, delta_geo, rng, budget);
        if (loc.capped || dom.in_holes(loc.zeta.xvec())) {
            res.killed = true;
            res.time_offset = loc.tau;
            res.position = loc.zeta;
            if (loc.capped) {
                std::vector<double> hole = nearest_hole_point(dom, res.position.xvec());
                std::copy(hole.begin(), hole.end(), res.position.c.begin());
                res.cap_events++;
            }
            return res;
        }
        // Window passage. Quarantine: excursions over time dq stay within the
        // window with probability >= 1 - O(e^{-8}) when 4 sqrt(dq) <= rho.
        const double rho = dom.hole_distance(loc.zeta.xvec());
        if (rho <= 0) {  // window-edge tie-break: kill
            res.killed = true;
            res.time_offset = loc.tau;
            res.position = loc.zeta;
            return res;
        }
        const double rem = h - loc.tau;
        const double dq = std::min(rem, rho * rho / 16.0);
        if (dq >= rem * (1.0 - 1e-12)) break;  // quarantine reaches the step end
        // Position at tau + dq on the bridge zeta -> b.
        const double frac = dq / rem;
        const double var = dq * (rem - dq) / rem;
        const double sdq = std::sqrt(var);
        Point next = loc.zeta;
        for (int k = 0; k < d; ++k)
            next.c[k] = loc.zeta.c[k] + frac * (b.c[k] - loc.zeta.c[k]) + sdq * rng.gaussian();
        cur = next;
        tcur = loc.tau + dq;
    }
    res.killed = false;
    res.position = b;
    return res;
}

PathOutcome simulate_path(const BenedicksDomain& dom, const Point& x0, const SimConfig& cfg,
                          uint64_t stream_id) {
    cfg.validate();
    if (!dom.contains(x0))
        throw std::invalid_argument("start point is outside the domain (killed at t = 0)");
    Rng rng(cfg.seed, stream_id);
    PathOutcome out;
    Point pos = x0;
    double t = 0;
    for (double target : cfg.checkpoints) {
        while (t < target && !out.killed) {
            const double step = std::min(cfg.h, target - t);
            StepResult sr = advance_step(dom, pos, step, cfg.delta_geo, rng);
            out.cap_events += sr.cap_events;
            if (sr.killed) {
                out.killed = true;
                out.kill_time = t + sr.time_offset;
                out.kill_location = sr.position;
            } else {
                pos = sr.position;
                t += step;
            }
        }
        if (out.killed) break;
        out.snapshots.push_back(pos);
    }
    return out;
}

EnsembleResult run_ensemble_range(const BenedicksDomain& dom, const Point& x0,
                                  const SimConfig& cfg, long stream_lo, long stream_hi) {
    cfg.validate();
    EnsembleResult res;
    res.config_hash = sim_config_hash(dom, x0, cfg);
    const size_t nc = cfg.checkpoints.size();
    res.curve.config_hash = res.config_hash;
    res.curve.rows.resize(nc);
    res.survivors.resize(nc);
    for (size_t i = 0; i < nc; ++i) res.curve.rows[i].t = cfg.checkpoints[i];
    for (long s = stream_lo; s < stream_hi; ++s) {
        PathOutcome po = simulate_path(dom, x0, cfg, static_cast<uint64_t>(s));
        res.cap_events += po.cap_events;
        for (size_t i = 0; i < po.snapshots.size(); ++i) {
            res.curve.rows[i].survivors++;
            res.survivors[i].push_back({s, po.snapshots[i]});
        }
        for (size_t i = 0; i < nc; ++i) res.curve.rows[i].n++;
        res.n_paths++;
    }
    return res;
}

EnsembleResult run_ensemble(const BenedicksDomain& dom, const Point& x0, const SimConfig& cfg) {
    return run_ensemble_range(dom, x0, cfg, 0, cfg.n_paths);
}

EnsembleResult merge_ensembles(const EnsembleResult& a, const EnsembleResult& b) {
    if (a.config_hash != b.config_hash)
        throw std::invalid_argument("cannot merge ensembles with different configs");
    if (a.n_paths == 0) return b;
    if (b.n_paths == 0) return a;
    EnsembleResult out;
    out.config_hash = a.config_hash;
    out.curve.config_hash = a.config_hash;
    out.n_paths = a.n_paths + b.n_paths;
    out.cap_events = a.cap_events + b.cap_events;
    const size_t nc = a.curve.rows.size();
    out.curve.rows.resize(nc);
    out.survivors.resize(nc);
    for (size_t i = 0; i < nc; ++i) {
        out.curve.rows[i].t = a.curve.rows[i].t;
        out.curve.rows[i].survivors = a.curve.rows[i].survivors + b.curve.rows[i].survivors;
        out.curve.rows[i].n = a.curve.rows[i].n + b.curve.rows[i].n;
        out.survivors[i].resize(a.survivors[i].size() + b.survivors[i].size());
        std::merge(a.survivors[i].begin(), a.survivors[i].end(), b.survivors[i].begin(),
                   b.survivors[i].end(), out.survivors[i].begin(),
                   [](const Survivor& x, const Survivor& y) { return x.stream < y.stream; });
    }
    return out;
}

uint64_t sim_config_hash(const BenedicksDomain& dom, const Point& x0, const SimConfig& cfg) {
    uint64_t h = 0xcbf29ce484222325ULL;
    int32_t d = dom.dim();
    h = fnv1a(&d, sizeof d, h);
    int32_t variant = dom.holes().variant == HoleVariant::FiniteHoles ? 0 : 1;
    h = fnv1a(&variant, sizeof variant, h);
    for (const Box& b : dom.holes().boxes) {
        for (double v : b.lo) hash_double(h, v);
        for (double v : b.hi) hash_double(h, v);
    }
    for (double v : x0.c) hash_double(h, v);
    hash_double(h, cfg.h);
    hash_double(h, cfg.delta_geo);
    hash_double(h, static_cast<double>(cfg.seed));
    for (double t : cfg.checkpoints) hash_double(h, t);
    // Deliberately excludes n_paths so partial ensembles of one run merge.
    return h;
}

}  // namespace bene
