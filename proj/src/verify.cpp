#include "bene/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bene {

void CheckReport::finalize() { pass = applicable ? max_violation <= tolerance + stat_margin : true; }

nlohmann::json CheckReport::to_json() const {
    return nlohmann::json{{"check_name", check_name},
                          {"domain_label", domain_label},
                          {"n_samples", n_samples},
                          {"n_skipped", n_skipped},
                          {"max_violation", max_violation},
                          {"tolerance", tolerance},
                          {"stat_margin", stat_margin},
                          {"pass", pass},
                          {"applicable", applicable},
                          {"note", note}};
}

CheckReport CheckReport::from_json(const nlohmann::json& j) {
    CheckReport r;
    r.check_name = j.at("check_name");
    r.domain_label = j.at("domain_label");
    r.n_samples = j.at("n_samples");
    r.n_skipped = j.at("n_skipped");
    r.max_violation = j.at("max_violation");
    r.tolerance = j.at("tolerance");
    r.stat_margin = j.at("stat_margin");
    r.pass = j.at("pass");
    r.applicable = j.at("applicable");
    r.note = j.at("note");
    return r;
}

CheckReport check_product_bound(const std::vector<ProductBoundTriple>& triples, int d,
                         const std::string& domain_label, double solver_tol,
                         double sigma_multiples) {
    CheckReport rep;
    rep.check_name = "product_bound";
    rep.domain_label = domain_label;
    rep.tolerance = solver_tol;
    rep.max_violation = -std::numeric_limits<double>::infinity();
    for (const auto& tr : triples) {
        double rhs = std::pow(2.0 * M_PI * tr.t, -0.5 * d) * tr.survival_x * tr.survival_y;
        double scale = std::max(rhs, 1e-300);
        double viol = (tr.p3t - rhs - sigma_multiples * tr.sigma) / scale;
        rep.max_violation = std::max(rep.max_violation, viol);
        rep.n_samples++;
    }
    rep.finalize();
    return rep;
}

CheckReport check_oblique(const std::vector<ObliqueSample>& samples,
                         const std::string& domain_label, double solver_tol) {
    CheckReport rep;
    rep.check_name = "oblique";
    rep.domain_label = domain_label;
    rep.tolerance = solver_tol;
    rep.max_violation = -std::numeric_limits<double>::infinity();
    for (const auto& s : samples) {
        if (!s.in_omega_plus) {
            rep.n_skipped++;
            continue;
        }
        double scale = std::max({s.p_x, s.p_sp + s.p_sm, 1e-300});
        rep.max_violation = std::max(rep.max_violation, (s.p_x - s.p_sp - s.p_sm) / scale);
        rep.n_samples++;
    }
    rep.finalize();
    return rep;
}

CheckReport check_reflection(const std::vector<ReflectionRow>& rows,
                             const std::string& domain_label, double tol) {
    CheckReport rep;
    rep.check_name = "reflection_identity";
    rep.domain_label = domain_label;
    rep.tolerance = tol;
    for (const auto& r : rows) {
        double resid = std::abs(r.p_xy - r.p_half - r.p_xystar) / std::max(r.p_xy, 1e-300);
        rep.max_violation = std::max(rep.max_violation, resid);
        rep.n_samples++;
    }
    rep.finalize();
    return rep;
}

CheckReport check_duhamel(const std::vector<DuhamelRow>& rows, const std::string& domain_label,
                          double tol) {
    CheckReport rep;
    rep.check_name = "duhamel";
    rep.domain_label = domain_label;
    rep.tolerance = tol;
    for (const auto& r : rows) {
        double resid = std::abs(r.p_pde - r.rhs) / std::max(r.p_pde, 1e-300);
        rep.max_violation = std::max(rep.max_violation, resid);
        rep.n_samples++;
    }
    rep.finalize();
    return rep;
}

CheckReport check_time_ratio(const SurvivalCurve& curve, double s,
                             const std::string& domain_label, double tol) {
    CheckReport rep;
    rep.check_name = "time_shift_ratio";
    rep.domain_label = domain_label;
    rep.tolerance = tol;
    if (s == 0) {
        rep.n_samples = static_cast<long>(curve.rows.size());
        rep.max_violation = 0;
        rep.finalize();
        return rep;
    }
    struct Pair {
        double t, ratio, sigma;
    };
    std::vector<Pair> pairs;
    for (const auto& row : curve.rows) {
        for (const auto& other : curve.rows) {
            if (std::abs(other.t - (row.t + s)) > 1e-9 * std::max(1.0, row.t)) continue;
            if (row.estimate() <= 0) continue;
            double ratio = other.estimate() / row.estimate();
            // Nested events: var of the ratio is driven by the paths lost in (t, t+s].
            double lost = row.estimate() - other.estimate();
            double sigma =
                row.n > 0 ? std::sqrt(std::max(lost, 0.0) / row.n) / row.estimate() : 0.0;
            pairs.push_back({row.t, ratio, sigma});
        }
    }
    if (pairs.empty()) {
        rep.applicable = false;
        rep.note = "no (t, t+s) pairs in the curve";
        rep.finalize();
        return rep;
    }
    rep.n_samples = static_cast<long>(pairs.size());
    const Pair& last = pairs.back();
    rep.max_violation = std::abs(last.ratio - 1.0);
    rep.stat_margin = 3.0 * last.sigma;
    // Trend toward 1: the final gap must not exceed the initial one beyond noise.
    double first_gap = std::abs(pairs.front().ratio - 1.0);
    if (rep.max_violation > first_gap + 3.0 * (last.sigma + pairs.front().sigma)) {
        rep.note = "gap to 1 grew with t";
        rep.max_violation = std::numeric_limits<double>::infinity();
    }
    rep.finalize();
    return rep;
}

CheckReport check_limit_laws(bool dimension_is_two, const std::vector<LimitRow>& rows,
                             const std::string& domain_label, double tol) {
    CheckReport rep;
    rep.check_name = "limit_laws";
    rep.domain_label = domain_label;
    rep.tolerance = tol;
    if (!dimension_is_two) {
        rep.applicable = false;
        rep.note = "cone dimension is not two; ratio limits apply instead";
        rep.finalize();
        return rep;
    }
    for (const auto& r : rows) {
        double rel = std::abs(r.measured - r.predicted) / std::max(std::abs(r.predicted), 1e-300);
        rep.max_violation = std::max(rep.max_violation, rel);
        rep.n_samples++;
    }
    rep.finalize();
    return rep;
}

}  // namespace bene
