#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bene/geometry.hpp"
#include "bene/mc.hpp"

namespace bene {

// Pass/fail record of one identity or inequality check. For inequalities the
// per-sample measure is signed ((lhs - rhs)/scale, positive = violated); for
// identities it is the relative residual. pass <=> max_violation <= tolerance
// + stat_margin.
struct CheckReport {
    std::string check_name;
    std::string domain_label;
    long n_samples = 0;
    long n_skipped = 0;
    double max_violation = 0;
    double tolerance = 0;
    double stat_margin = 0;
    bool pass = false;
    bool applicable = true;
    std::string note;

    nlohmann::json to_json() const;
    static CheckReport from_json(const nlohmann::json& j);
    void finalize();  // sets pass from max_violation, tolerance, stat_margin
};

// Product bound: p_{3t}(x,y) <= (2 pi t)^{-d/2} P_x(T>t) P_y(T>t).
struct ProductBoundTriple {
    double t = 0;
    double p3t = 0;           // estimated p_{3t}(x, y)
    double survival_x = 0;    // P_x(T > t)
    double survival_y = 0;
    double sigma = 0;         // combined 1-sigma statistical scale of the lhs-rhs gap
};
CheckReport check_product_bound(const std::vector<ProductBoundTriple>& triples, int d,
                         const std::string& domain_label, double solver_tol,
                         double sigma_multiples = 3.0);

// Oblique symmetry estimate: p_t(x,y) <= p_t(S+x, y) + p_t(S-x, y) on Omega^+.
struct ObliqueSample {
    bool in_omega_plus = false;
    double p_x = 0, p_sp = 0, p_sm = 0;
};
CheckReport check_oblique(const std::vector<ObliqueSample>& samples,
                         const std::string& domain_label, double solver_tol);

// Reflection identity p_t(x,y) = p^H_t(x,y) + p_t(x,y*), x_d y_d > 0.
struct ReflectionRow {
    double t = 0;
    double p_xy = 0, p_half = 0, p_xystar = 0;
};
CheckReport check_reflection(const std::vector<ReflectionRow>& rows,
                             const std::string& domain_label, double tol = 0.02);

// Duhamel representation: PDE kernel vs half-space term + boundary integral.
struct DuhamelRow {
    double t = 0;
    double p_pde = 0, rhs = 0;
};
CheckReport check_duhamel(const std::vector<DuhamelRow>& rows, const std::string& domain_label,
                          double tol = 0.05);

// P_x(T > t+s)/P_x(T > t) -> 1.
CheckReport check_time_ratio(const SurvivalCurve& curve, double s,
                             const std::string& domain_label, double tol = 0.01);

// Long-time limit laws against the harmonic-profile predictions.
struct LimitRow {
    std::string name;
    double measured = 0, predicted = 0;
};
CheckReport check_limit_laws(bool dimension_is_two, const std::vector<LimitRow>& rows,
                             const std::string& domain_label, double tol = 0.05);

}  // namespace bene
