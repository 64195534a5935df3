#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bene/mc.hpp"

namespace bene {

struct SeriesRow {
    double t = 0;
    double value = 0;
    double stderr_est = 0;
};

enum class RateModel { PurePower, LogCorrectedPower, Plateau };

std::string to_string(RateModel m);

// Fitted asymptotic law value ~ C t^{-p} (log t)^{-q}.
struct RateFit {
    RateModel model = RateModel::PurePower;
    double exponent = 0;       // p
    double log_power = 0;      // q, zero unless LogCorrectedPower
    double prefactor = 0;      // C
    std::pair<double, double> ci_exponent{0, 0};
    std::pair<double, double> ci_log_power{0, 0};
    double t_min = 0, t_max = 0;
    double goodness = 0;  // weighted RSS per point of the chosen model
    std::map<std::string, double> criterion_scores;
};

struct FitOptions {
    int bootstrap_resamples = 200;
    uint64_t bootstrap_seed = 0x5eedb007;
};

// Weighted least squares in log-log; model family selected by an information
// criterion penalizing the log-correction parameter.
RateFit fit_rate(const std::vector<SeriesRow>& series, double t_min, double t_max,
                 const FitOptions& opt = {});

enum class ConeDimension { One, Two, Inconclusive };

std::string to_string(ConeDimension c);

struct ConeThresholds {
    double slope_tol = 0.05;
    double slope_min = 0.10;
    double min_decades = 1.5;
};

struct ConeReport {
    ConeDimension dimension = ConeDimension::Inconclusive;
    double final_decade_slope = 0;  // log-log slope of g(t) = sqrt(t) P(t)
    ConeThresholds thresholds;
    std::vector<SeriesRow> g_series;
    std::string note;
};

// The dichotomy read off g(t) = sqrt(t) * P_x(T > t): flat tail means
// dimension two, a persistent positive slope means dimension one.
ConeReport classify_cone_dimension(const SurvivalCurve& curve,
                                   const ConeThresholds& thresholds = {});
ConeReport classify_cone_dimension(const std::vector<SeriesRow>& survival,
                                   const ConeThresholds& thresholds = {});

// 2 (2 pi)^{-d/2} (u1(x) u1(y) + u2(x) u2(y)).
double kernel_prefactor_prediction(int d, double u1x, double u1y, double u2x, double u2y);

// sqrt(2/pi) v_s(x).
double plateau_prediction(double v_s_at_x);

struct KernelBoundSample {
    double t = 0;
    int d = 2;
    double p_value = 0;
    double vs_x = 0, vs_y = 0;
};

struct SurvivalBoundSample {
    double t = 0;
    double survival = 0;
    double vs_x = 0;
};

struct BoundFitReport {
    bool applicable = true;  // the growth bound assumes cone dimension two
    double gamma_hat = 0;    // sup t^{1+d/2} p_t(x,y) / ((1+v_s(x))(1+v_s(y)))
    double k_hat = 0;        // sup sqrt(t) P_x(T>t) / (1+v_s(x))
    bool growth_flag = false;
    double kernel_trend_slope = 0, survival_trend_slope = 0;
    long n_kernel = 0, n_survival = 0;
};

BoundFitReport fit_bound_constants(ConeDimension dim,
                                   const std::vector<KernelBoundSample>& kernel_samples,
                                   const std::vector<SurvivalBoundSample>& survival_samples);

}  // namespace bene
