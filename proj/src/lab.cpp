#include "bene/lab.hpp"

#include <algorithm>
#include <cmath>

#include "bene/analytic.hpp"

namespace bene {

HeatOptions heat_options(const PdeParams& p) {
    HeatOptions opt;
    opt.dt = p.dt;
    opt.dt_ramp = p.dt_ramp;
    opt.dt_max = p.dt_max;
    return opt;
}

std::vector<Field> lab_kernel(const BenedicksDomain& dom, const Grid& grid, const Point& x,
                              const std::vector<double>& t_grid, const PdeParams& p) {
    double t0 = p.t0 > 0 ? p.t0 : pick_kernel_t0(dom, grid, x);
    return kernel_field(dom, grid, x, t0, t_grid, heat_options(p));
}

std::vector<Field> lab_kernel_traced(const BenedicksDomain& dom, const Grid& grid,
                                     const Point& x, const std::vector<double>& t_grid,
                                     const PdeParams& p, LineTrace& trace) {
    double t0 = p.t0 > 0 ? p.t0 : pick_kernel_t0(dom, grid, x);
    HeatOptions opt = heat_options(p);
    trace.times.clear();
    trace.values.clear();
    opt.observer = [&](double t, const std::vector<double>& u) {
        trace.times.push_back(t);
        std::vector<double> line(grid.line_d_nodes.size());
        for (size_t m = 0; m < line.size(); ++m)
            line[m] = u[grid.idx(grid.line_d_nodes[m], grid.j0)];
        trace.values.push_back(std::move(line));
    };
    return kernel_field(dom, grid, x, t0, t_grid, opt);
}

std::vector<Field> lab_survival(const Grid& grid, const std::vector<double>& t_grid,
                                const PdeParams& p) {
    return survival_field(grid, t_grid, heat_options(p));
}

std::vector<ProductBoundTriple> product_bound_inventory(const BenedicksDomain& dom, const Grid& grid,
                                           const PdeParams& p, const Point& x,
                                           const std::vector<Point>& ys,
                                           const std::vector<double>& ts) {
    std::vector<double> kernel_times;
    for (double t : ts) kernel_times.push_back(3.0 * t);
    auto ksnaps = lab_kernel(dom, grid, x, kernel_times, p);
    auto ssnaps = lab_survival(grid, ts, p);
    std::vector<ProductBoundTriple> out;
    for (size_t it = 0; it < ts.size(); ++it) {
        double px = field_at(grid, ssnaps[it], x);
        for (const Point& y : ys) {
            ProductBoundTriple tr;
            tr.t = ts[it];
            tr.p3t = field_at(grid, ksnaps[it], y);
            tr.survival_x = px;
            tr.survival_y = field_at(grid, ssnaps[it], y);
            tr.sigma = 0;  // deterministic inputs
            out.push_back(tr);
        }
    }
    return out;
}

std::vector<ReflectionRow> reflection_rows(const BenedicksDomain& dom, const Grid& grid,
                                           const PdeParams& p, const Point& x, const Point& y,
                                           const std::vector<double>& ts) {
    auto snaps = lab_kernel(dom, grid, x, ts, p);
    Point ystar = mirror_across_hyperplane(y);
    std::vector<ReflectionRow> rows;
    for (size_t i = 0; i < ts.size(); ++i) {
        ReflectionRow r;
        r.t = ts[i];
        r.p_xy = field_at(grid, snaps[i], y);
        r.p_half = halfspace_kernel(ts[i], x, y);
        r.p_xystar = field_at(grid, snaps[i], ystar);
        rows.push_back(r);
    }
    return rows;
}

std::vector<DuhamelRow> duhamel_rows(const BenedicksDomain& dom, const Grid& grid,
                                     const PdeParams& p, const Point& x, const Point& y,
                                     const std::vector<double>& ts) {
    // Solve from y; symmetry gives p_t(x, y) and the trace p_s((xi,0), y).
    LineTrace trace;
    auto snaps = lab_kernel_traced(dom, grid, y, ts, p, trace);
    std::vector<DuhamelRow> rows;
    for (size_t i = 0; i < ts.size(); ++i) {
        DuhamelRow r;
        r.t = ts[i];
        r.p_pde = field_at(grid, snaps[i], x);
        r.rhs = duhamel_rhs(grid, trace, x, y, ts[i]);
        rows.push_back(r);
    }
    return rows;
}

std::vector<ObliqueSample> oblique_samples(const BenedicksDomain& dom, const Grid& grid,
                                         const PdeParams& p, const ReflectionFrame& frame,
                                         const std::vector<Point>& xs, double t) {
    auto snaps = lab_kernel(dom, grid, frame.y, {t}, p);
    const Field& f = snaps.front();
    auto inside_box = [&](const Point& q) {
        return std::abs(q.c[0]) < grid.L - grid.dx && std::abs(q.c[1]) < grid.L - grid.dx;
    };
    std::vector<ObliqueSample> out;
    for (const Point& x : xs) {
        ObliqueSample s;
        s.in_omega_plus = in_omega_plus(frame, x) && dom.contains(x) && inside_box(x);
        if (s.in_omega_plus) {
            auto [sp, sm] = oblique_reflections(frame, x);
            if (!inside_box(sp) || !inside_box(sm)) {
                s.in_omega_plus = false;  // image outside the computational box
            } else {
                s.p_x = field_at(grid, f, x);
                s.p_sp = field_at(grid, f, sp);
                s.p_sm = field_at(grid, f, sm);
            }
        }
        out.push_back(s);
    }
    return out;
}

double slit_harmonic(const Point& x) {
    double theta = std::atan2(x.c[1], x.c[0]);
    if (theta <= 0) theta += 2.0 * M_PI;  // branch cut on [0, inf)
    double r = std::hypot(x.c[0], x.c[1]);
    return std::sqrt(r) * std::sin(0.5 * theta);
}

std::vector<SeriesRow> survival_series_at(const Grid& grid, const std::vector<Field>& snaps,
                                          const Point& x) {
    std::vector<SeriesRow> out;
    for (const Field& f : snaps) out.push_back({f.t, field_at(grid, f, x), 0.0});
    return out;
}

std::vector<SeriesRow> kernel_limit_series(const Grid& grid, const std::vector<Field>& snaps,
                                           const Point& y, int d) {
    std::vector<SeriesRow> out;
    for (const Field& f : snaps)
        out.push_back({f.t, std::pow(f.t, 1.0 + 0.5 * d) * field_at(grid, f, y), 0.0});
    return out;
}

}  // namespace bene
