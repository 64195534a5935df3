#include "bene/estimators.hpp"

#include <cmath>
#include <stdexcept>

#include "bene/analytic.hpp"

namespace bene {

double default_smoothing_window(const Point& x, const Point& y) {
    double xd2 = x.xd() * x.xd(), yd2 = y.xd() * y.xd();
    return 0.1 * std::min({1.0, xd2, yd2});
}

KernelEstimate kernel_estimate(const BenedicksDomain& dom, const Point& x, const Point& y,
                               double t, double h_f, const std::vector<Survivor>& endpoints,
                               long n_paths, uint64_t config_hash) {
    (void)dom;
    if (!(h_f > 0) || h_f >= t) throw std::domain_error("smoothing window must satisfy 0 < h_f < t");
    KernelEstimate est;
    est.t = t;
    est.x = x;
    est.y = y;
    est.h_f = h_f;
    est.n = n_paths;
    est.config_hash = config_hash;
    if (y.xd() == 0.0) return est;  // kappa vanishes on the hyperplane
    for (const Survivor& s : endpoints) {
        if (s.pos.xd() * y.xd() <= 0) continue;  // same-side kernel only
        double k = halfspace_kernel(h_f, s.pos, y);
        est.sum += k;
        est.sum_sq += k * k;
    }
    est.value = n_paths ? est.sum / n_paths : 0.0;
    if (n_paths > 1) {
        double var = (est.sum_sq - est.sum * est.sum / n_paths) / (n_paths - 1);
        est.stderr_est = std::sqrt(std::max(0.0, var) / n_paths);
    }
    return est;
}

SurvivalCurve survival_estimate(const EnsembleResult& ensemble) {
    if (ensemble.n_paths == 0) throw std::invalid_argument("empty ensemble");
    return ensemble.curve;
}

KernelEstimate merge(const KernelEstimate& a, const KernelEstimate& b) {
    if (a.n == 0) return b;
    if (b.n == 0) return a;
    if (a.config_hash != b.config_hash || a.t != b.t || a.h_f != b.h_f || a.x.c != b.x.c ||
        a.y.c != b.y.c)
        throw std::invalid_argument("cannot merge kernel estimates with mismatched configs");
    KernelEstimate out = a;
    out.n = a.n + b.n;
    out.sum = a.sum + b.sum;
    out.sum_sq = a.sum_sq + b.sum_sq;
    out.value = out.sum / out.n;
    double var = (out.sum_sq - out.sum * out.sum / out.n) / (out.n - 1);
    out.stderr_est = std::sqrt(std::max(0.0, var) / out.n);
    return out;
}

SurvivalCurve merge(const SurvivalCurve& a, const SurvivalCurve& b) {
    if (a.rows.empty()) return b;
    if (b.rows.empty()) return a;
    if (a.config_hash != b.config_hash)
        throw std::invalid_argument("cannot merge survival curves with mismatched configs");
    SurvivalCurve out = a;
    for (size_t i = 0; i < out.rows.size(); ++i) {
        out.rows[i].survivors += b.rows[i].survivors;
        out.rows[i].n += b.rows[i].n;
    }
    return out;
}

}  // namespace bene
