#include "bene/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bene/rng.hpp"

namespace bene {

namespace {

// Weighted linear least squares for log v = X beta; columns given per model.
struct LinFit {
    std::vector<double> beta;
    double wrss = 0;
};

LinFit solve_wls(const std::vector<std::vector<double>>& X, const std::vector<double>& y,
                 const std::vector<double>& w) {
    const size_t n = y.size();
    const size_t k = X[0].size();
    // Normal equations, k <= 3; solved by Gaussian elimination.
    std::vector<std::vector<double>> A(k, std::vector<double>(k + 1, 0.0));
    for (size_t i = 0; i < n; ++i)
        for (size_t a = 0; a < k; ++a) {
            for (size_t b = 0; b < k; ++b) A[a][b] += w[i] * X[i][a] * X[i][b];
            A[a][k] += w[i] * X[i][a] * y[i];
        }
    for (size_t p = 0; p < k; ++p) {
        size_t piv = p;
        for (size_t r = p + 1; r < k; ++r)
            if (std::abs(A[r][p]) > std::abs(A[piv][p])) piv = r;
        std::swap(A[p], A[piv]);
        if (A[p][p] == 0) throw std::runtime_error("degenerate fit design");
        for (size_t r = 0; r < k; ++r) {
            if (r == p) continue;
            double f = A[r][p] / A[p][p];
            for (size_t cidx = p; cidx <= k; ++cidx) A[r][cidx] -= f * A[p][cidx];
        }
    }
    LinFit fit;
    fit.beta.resize(k);
    for (size_t p = 0; p < k; ++p) fit.beta[p] = A[p][k] / A[p][p];
    for (size_t i = 0; i < n; ++i) {
        double pred = 0;
        for (size_t a = 0; a < k; ++a) pred += X[i][a] * fit.beta[a];
        double r = y[i] - pred;
        fit.wrss += w[i] * r * r;
    }
    return fit;
}

std::vector<std::vector<double>> design(RateModel m, const std::vector<double>& logt,
                                        const std::vector<double>& loglogt) {
    std::vector<std::vector<double>> X(logt.size());
    for (size_t i = 0; i < logt.size(); ++i) {
        switch (m) {
            case RateModel::Plateau: X[i] = {1.0}; break;
            case RateModel::PurePower: X[i] = {1.0, -logt[i]}; break;
            case RateModel::LogCorrectedPower: X[i] = {1.0, -logt[i], -loglogt[i]}; break;
        }
    }
    return X;
}

double slope_loglog(const std::vector<SeriesRow>& rows) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    long n = 0;
    for (const auto& r : rows) {
        if (!(r.t > 0) || !(r.value > 0)) continue;
        double x = std::log(r.t), y = std::log(r.value);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) return 0;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

std::string to_string(RateModel m) {
    switch (m) {
        case RateModel::PurePower: return "pure_power";
        case RateModel::LogCorrectedPower: return "log_corrected_power";
        case RateModel::Plateau: return "plateau";
    }
    return "?";
}

std::string to_string(ConeDimension c) {
    switch (c) {
        case ConeDimension::One: return "one";
        case ConeDimension::Two: return "two";
        case ConeDimension::Inconclusive: return "inconclusive";
    }
    return "?";
}

RateFit fit_rate(const std::vector<SeriesRow>& series, double t_min, double t_max,
                 const FitOptions& opt) {
    std::vector<double> logt, loglogt, logv, w;
    for (const auto& r : series) {
        if (r.t < t_min || r.t > t_max) continue;
        if (!(r.value > 0)) throw std::invalid_argument("fit_rate needs positive values");
        logt.push_back(std::log(r.t));
        loglogt.push_back(r.t > 1 ? std::log(std::log(r.t)) : 0.0);
        logv.push_back(std::log(r.value));
        double sigma = r.stderr_est > 0 ? r.stderr_est / r.value : 0.0;
        w.push_back(sigma > 0 ? 1.0 / (sigma * sigma) : 0.0);
    }
    const size_t n = logt.size();
    if (n < 8) throw std::invalid_argument("fit_rate needs at least 8 points in the window");
    if (*std::max_element(logt.begin(), logt.end()) <=
        *std::min_element(logt.begin(), logt.end()))
        throw std::invalid_argument("degenerate fit window");
    // Unit weights when no stderr information is present.
    const bool have_stderr = !std::all_of(w.begin(), w.end(), [](double x) { return x == 0; });
    if (!have_stderr)
        std::fill(w.begin(), w.end(), 1.0);
    else
        for (double& x : w)
            if (x == 0) x = *std::max_element(w.begin(), w.end());

    const bool log_ok = *std::min_element(logt.begin(), logt.end()) > 0;
    std::vector<RateModel> candidates{RateModel::Plateau, RateModel::PurePower};
    if (log_ok) candidates.push_back(RateModel::LogCorrectedPower);

    RateFit best;
    double best_ic = 0;
    bool have = false;
    std::map<std::string, double> scores;
    for (RateModel m : candidates) {
        auto X = design(m, logt, loglogt);
        LinFit fit = solve_wls(X, logv, w);
        const double k = static_cast<double>(X[0].size());
        // Floor keeps exact-fit ties decided by the parameter penalty.
        const double ic = n * std::log(std::max(fit.wrss / n, 1e-24)) + 2.0 * k;
        scores[to_string(m)] = ic;
        if (!have || ic < best_ic) {
            have = true;
            best_ic = ic;
            best.model = m;
            best.prefactor = std::exp(fit.beta[0]);
            best.exponent = fit.beta.size() > 1 ? fit.beta[1] : 0.0;
            best.log_power = fit.beta.size() > 2 ? fit.beta[2] : 0.0;
            best.goodness = fit.wrss / n;
        }
    }
    best.criterion_scores = scores;
    best.t_min = t_min;
    best.t_max = t_max;

    // Parametric bootstrap of the chosen model; fixed sub-seed.
    std::vector<double> boot_p, boot_q;
    Rng rng(opt.bootstrap_seed, 0);
    auto X = design(best.model, logt, loglogt);
    for (int b = 0; b < opt.bootstrap_resamples; ++b) {
        std::vector<double> yb(n);
        // Without stderr data the residual RMS of the chosen model sets the
        // noise scale.
        const double rms = std::sqrt(best.goodness);
        for (size_t i = 0; i < n; ++i) {
            double sigma = have_stderr ? 1.0 / std::sqrt(w[i]) : rms;
            yb[i] = logv[i] + sigma * rng.gaussian();
        }
        LinFit fit = solve_wls(X, yb, w);
        boot_p.push_back(fit.beta.size() > 1 ? fit.beta[1] : 0.0);
        boot_q.push_back(fit.beta.size() > 2 ? fit.beta[2] : 0.0);
    }
    auto pct_ci = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        size_t lo = static_cast<size_t>(0.025 * (v.size() - 1));
        size_t hi = static_cast<size_t>(std::ceil(0.975 * (v.size() - 1)));
        return std::make_pair(v[lo], v[hi]);
    };
    best.ci_exponent = pct_ci(boot_p);
    best.ci_log_power = pct_ci(boot_q);
    return best;
}

ConeReport classify_cone_dimension(const SurvivalCurve& curve, const ConeThresholds& thr) {
    std::vector<SeriesRow> rows;
    for (const auto& r : curve.rows)
        rows.push_back({r.t, r.estimate(), r.stderr_est()});
    return classify_cone_dimension(rows, thr);
}

ConeReport classify_cone_dimension(const std::vector<SeriesRow>& survival,
                                   const ConeThresholds& thr) {
    ConeReport rep;
    rep.thresholds = thr;
    for (const auto& r : survival) {
        if (!(r.t > 0) || !(r.value > 0)) continue;
        double g = std::sqrt(r.t) * r.value;
        rep.g_series.push_back({r.t, g, std::sqrt(r.t) * r.stderr_est});
    }
    if (rep.g_series.size() < 4) {
        rep.note = "too few positive survival points";
        return rep;
    }
    double t_lo = rep.g_series.front().t, t_hi = rep.g_series.back().t;
    if (std::log10(t_hi / t_lo) < thr.min_decades) {
        rep.note = "window narrower than the required decades; L-truncation may bind";
        return rep;
    }
    std::vector<SeriesRow> tail;
    for (const auto& r : rep.g_series)
        if (r.t >= t_hi / 10.0) tail.push_back(r);
    rep.final_decade_slope = slope_loglog(tail);
    if (std::abs(rep.final_decade_slope) < thr.slope_tol)
        rep.dimension = ConeDimension::Two;
    else if (rep.final_decade_slope >= thr.slope_min)
        rep.dimension = ConeDimension::One;
    else
        rep.note = "slope between thresholds; L-truncation may bind";
    return rep;
}

double kernel_prefactor_prediction(int d, double u1x, double u1y, double u2x, double u2y) {
    return 2.0 * std::pow(2.0 * M_PI, -0.5 * d) * (u1x * u1y + u2x * u2y);
}

double plateau_prediction(double v_s_at_x) { return std::sqrt(2.0 / M_PI) * v_s_at_x; }

BoundFitReport fit_bound_constants(ConeDimension dim,
                                   const std::vector<KernelBoundSample>& kernel_samples,
                                   const std::vector<SurvivalBoundSample>& survival_samples) {
    BoundFitReport rep;
    if (dim != ConeDimension::Two) {
        rep.applicable = false;
        return rep;
    }
    std::vector<SeriesRow> kern_ratio, surv_ratio;
    for (const auto& s : kernel_samples) {
        if (!(s.t > 1)) continue;  // the bound is stated for t > 1
        double v = std::pow(s.t, 1.0 + 0.5 * s.d) * s.p_value / ((1 + s.vs_x) * (1 + s.vs_y));
        rep.gamma_hat = std::max(rep.gamma_hat, v);
        if (v > 0) kern_ratio.push_back({s.t, v, 0});
        rep.n_kernel++;
    }
    for (const auto& s : survival_samples) {
        if (!(s.t > 0)) continue;
        double v = std::sqrt(s.t) * s.survival / (1 + s.vs_x);
        rep.k_hat = std::max(rep.k_hat, v);
        if (v > 0) surv_ratio.push_back({s.t, v, 0});
        rep.n_survival++;
    }
    rep.kernel_trend_slope = slope_loglog(kern_ratio);
    rep.survival_trend_slope = slope_loglog(surv_ratio);
    rep.growth_flag = rep.kernel_trend_slope > 0.05 || rep.survival_trend_slope > 0.05;
    return rep;
}

}  // namespace bene
