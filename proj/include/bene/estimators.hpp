#pragma once

#include "bene/mc.hpp"

namespace bene {

struct KernelEstimate {
    double t = 0;
    Point x, y;
    double value = 0;   // lower-biased estimate of p_t(x, y); bias -> 0 as h_f -> 0
    double stderr_est = 0;
    double h_f = 0;     // smoothing window
    long n = 0;
    uint64_t config_hash = 0;
    // Accumulators so estimates merge exactly.
    double sum = 0, sum_sq = 0;
};

// Chapman-Kolmogorov smoothing: (1/N) sum over paths of
// 1_{T > t - h_f} kappa_{h_f}(X_{t-h_f}, y), kappa the same-side half-space
// kernel. kappa <= p makes this a consistent lower bound.
KernelEstimate kernel_estimate(const BenedicksDomain& dom, const Point& x, const Point& y,
                               double t, double h_f, const std::vector<Survivor>& endpoints,
                               long n_paths, uint64_t config_hash);

// Default smoothing window 0.1 * min(1, x_d^2, y_d^2).
double default_smoothing_window(const Point& x, const Point& y);

SurvivalCurve survival_estimate(const EnsembleResult& ensemble);

KernelEstimate merge(const KernelEstimate& a, const KernelEstimate& b);
SurvivalCurve merge(const SurvivalCurve& a, const SurvivalCurve& b);

}  // namespace bene
