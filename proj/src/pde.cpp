#include "bene/pde.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bene/analytic.hpp"

namespace bene {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

// Tridiagonal solve of (1 + 2r) u_i - r u_{i-1} - r u_{i+1} = rhs_i along one
// line, with identity rows (u = 0) at masked nodes.
void thomas_line(const uint8_t* mask, const double* rhs, double* out, double* cp, double* dp,
                 int n, double r) {
    const double b = 1.0 + 2.0 * r;
    // Forward sweep.
    if (mask[0]) {
        cp[0] = 0;
        dp[0] = 0;
    } else {
        cp[0] = -r / b;
        dp[0] = rhs[0] / b;
    }
    for (int i = 1; i < n; ++i) {
        if (mask[i]) {
            cp[i] = 0;
            dp[i] = 0;
        } else {
            const double a = mask[i - 1] ? 0.0 : -r;
            const double denom = b - a * cp[i - 1];
            cp[i] = -r / denom;
            dp[i] = (rhs[i] - a * dp[i - 1]) / denom;
        }
    }
    out[n - 1] = dp[n - 1];
    for (int i = n - 2; i >= 0; --i)
        out[i] = mask[i] ? 0.0 : dp[i] - cp[i] * out[i + 1];
}

void transpose(const std::vector<double>& in, std::vector<double>& out, int n) {
    constexpr int B = 32;
    for (int jb = 0; jb < n; jb += B)
        for (int ib = 0; ib < n; ib += B)
            for (int j = jb; j < std::min(jb + B, n); ++j)
                for (int i = ib; i < std::min(ib + B, n); ++i)
                    out[i * n + j] = in[j * n + i];
}

}  // namespace

double Grid::mask_distance(const BenedicksDomain& dom, const Point& x) const {
    double dh = dom.hole_distance(x.xvec());
    double to_holes = std::sqrt(dh * dh + x.xd() * x.xd());
    double to_box = L - std::max(std::abs(x.c[0]), std::abs(x.c[1]));
    return std::min(to_holes, to_box);
}

Grid build_grid(const BenedicksDomain& dom, double L, double dx) {
    if (dom.dim() != 2) throw std::invalid_argument("the PDE lab is two-dimensional");
    if (!(L > 0) || !(dx > 0)) throw std::invalid_argument("L and dx must be positive");
    double ratio = L / dx;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio)
        throw std::invalid_argument("dx must divide L");
    Grid g;
    g.L = L;
    g.dx = dx;
    g.n = 2 * static_cast<int>(std::round(ratio)) + 1;
    g.j0 = static_cast<int>(std::round(ratio));
    g.mask.assign(static_cast<size_t>(g.n) * g.n, 0);
    for (int i = 0; i < g.n; ++i) {
        g.mask[g.idx(i, 0)] = 1;
        g.mask[g.idx(i, g.n - 1)] = 1;
        g.mask[g.idx(0, i)] = 1;
        g.mask[g.idx(g.n - 1, i)] = 1;
    }
    // Hole nodes on the line, and the snapping report.
    std::ostringstream rep;
    for (const Box& b : dom.holes().boxes) {
        if (dom.holes().variant == HoleVariant::FiniteHoles) {
            double lo = std::max(b.lo[0], -L), hi = std::min(b.hi[0], L);
            if (lo > hi) continue;
            if (b.hi[0] - b.lo[0] < dx)
                throw std::invalid_argument("hole narrower than dx; refine dx");
            for (double e : {lo, hi}) {
                double snap = std::abs(e / dx - std::round(e / dx)) * dx;
                rep << "endpoint " << e << " snap distance " << snap << "\n";
            }
        }
    }
    if (dom.holes().variant == HoleVariant::FiniteWindows) {
        for (const Box& b : dom.holes().boxes)
            if (b.hi[0] - b.lo[0] < dx)
                throw std::invalid_argument("window narrower than dx; refine dx");
    }
    for (int i = 1; i < g.n - 1; ++i) {
        double xi[1] = {g.coord(i)};
        if (dom.in_holes(std::span<const double>(xi, 1)))
            g.mask[g.idx(i, g.j0)] = 1;
        else
            g.line_d_nodes.push_back(i);
    }
    g.snap_report = rep.str();
    return g;
}

std::vector<Field> heat_solve(const Grid& grid, const Field& init,
                              const std::vector<double>& t_grid, const HeatOptions& opt) {
    const int n = grid.n;
    const size_t nn = static_cast<size_t>(n) * n;
    if (init.v.size() != nn) throw std::invalid_argument("init field does not match the grid");
    for (size_t k = 0; k < nn; ++k)
        if (grid.mask[k] && init.v[k] != 0.0)
            throw std::invalid_argument("init field is nonzero on the Dirichlet mask");
    bool nonneg = std::all_of(init.v.begin(), init.v.end(), [](double v) { return v >= 0; });

    std::vector<double> u = init.v, ustar(nn), ut(nn), ut2(nn), rhs(n), cp(n), dp(n), out(n);
    std::vector<uint8_t> mask_t(nn);
    {
        std::vector<double> tmp(grid.mask.begin(), grid.mask.end());
        std::vector<double> tmp2(nn);
        transpose(tmp, tmp2, n);
        for (size_t k = 0; k < nn; ++k) mask_t[k] = tmp2[k] != 0 ? 1 : 0;
    }

    std::vector<Field> snaps;
    double t = init.t;
    double dt = opt.dt;
    double max_prev = *std::max_element(u.begin(), u.end());
    size_t next_snap = 0;
    while (next_snap < t_grid.size() && t_grid[next_snap] <= t + 1e-14) {
        snaps.push_back({t, u});
        ++next_snap;
    }
    while (next_snap < t_grid.size()) {
        if (t >= t_grid[next_snap] - 1e-12 * std::max(1.0, t)) {
            snaps.push_back({t, u});
            ++next_snap;
            continue;
        }
        double step = std::min(dt, t_grid[next_snap] - t);
        const double r = step / (4.0 * grid.dx * grid.dx);
        // Stage 1: implicit in x, explicit in y.
        for (int j = 0; j < n; ++j) {
            const double* uj = &u[grid.idx(0, j)];
            const uint8_t* mj = &grid.mask[grid.idx(0, j)];
            if (j == 0 || j == n - 1) {
                for (int i = 0; i < n; ++i) rhs[i] = 0;
            } else {
                const double* um = &u[grid.idx(0, j - 1)];
                const double* up = &u[grid.idx(0, j + 1)];
                for (int i = 0; i < n; ++i)
                    rhs[i] = mj[i] ? 0.0 : uj[i] + r * (up[i] - 2.0 * uj[i] + um[i]);
            }
            thomas_line(mj, rhs.data(), &ustar[grid.idx(0, j)], cp.data(), dp.data(), n, r);
        }
        // Stage 2: implicit in y, done on the transpose.
        transpose(ustar, ut, n);
        for (int j = 0; j < n; ++j) {  // j indexes original columns now
            const double* uj = &ut[grid.idx(0, j)];
            const uint8_t* mj = &mask_t[grid.idx(0, j)];
            if (j == 0 || j == n - 1) {
                for (int i = 0; i < n; ++i) rhs[i] = 0;
            } else {
                const double* um = &ut[grid.idx(0, j - 1)];
                const double* up = &ut[grid.idx(0, j + 1)];
                for (int i = 0; i < n; ++i)
                    rhs[i] = mj[i] ? 0.0 : uj[i] + r * (up[i] - 2.0 * uj[i] + um[i]);
            }
            // Solve into a separate buffer: rows of ut are still explicit
            // data for the neighboring columns.
            thomas_line(mj, rhs.data(), &ut2[grid.idx(0, j)], cp.data(), dp.data(), n, r);
        }
        transpose(ut2, u, n);
        t += step;
        if (nonneg) {
            double mx = *std::max_element(u.begin(), u.end());
            if (mx > max_prev * 1.01 + 1e-300)
                throw std::runtime_error("heat solver instability: max-norm growth at t = " +
                                         std::to_string(t));
            max_prev = mx;
        }
        if (opt.observer) opt.observer(t, u);
        dt = std::min(dt * opt.dt_ramp, opt.dt_max);
    }
    return snaps;
}

std::vector<Field> survival_field(const Grid& grid, const std::vector<double>& t_grid,
                                  const HeatOptions& opt) {
    Field init;
    init.t = 0;
    init.v.assign(grid.mask.size(), 0.0);
    for (size_t k = 0; k < grid.mask.size(); ++k)
        if (!grid.mask[k]) init.v[k] = 1.0;
    return heat_solve(grid, init, t_grid, opt);
}

double pick_kernel_t0(const BenedicksDomain& dom, const Grid& grid, const Point& x) {
    double lo = 16.0 * grid.dx * grid.dx;            // sqrt(t0) >= 4 dx
    double dist = grid.mask_distance(dom, x);
    double hi = dist * dist / 16.0;                  // t0 <= (dist/4)^2
    if (lo > hi) {
        std::ostringstream msg;
        msg << "start point too close to the Dirichlet set: need (4 dx)^2 = " << lo
            << " <= t0 <= (dist/4)^2 = " << hi << "; refine dx or move the point";
        throw std::invalid_argument(msg.str());
    }
    return lo;
}

std::vector<Field> kernel_field(const BenedicksDomain& dom, const Grid& grid, const Point& x,
                                double t0, const std::vector<double>& t_grid,
                                const HeatOptions& opt) {
    double lo = 16.0 * grid.dx * grid.dx;
    double dist = grid.mask_distance(dom, x);
    if (t0 < lo * (1 - 1e-12) || t0 > dist * dist / 16.0 * (1 + 1e-12)) {
        std::ostringstream msg;
        msg << "invalid t0 = " << t0 << ": need (4 dx)^2 = " << lo
            << " <= t0 <= (dist(x, mask)/4)^2 = " << dist * dist / 16.0;
        throw std::invalid_argument(msg.str());
    }
    Field init;
    init.t = t0;
    init.v.assign(grid.mask.size(), 0.0);
    for (int j = 0; j < grid.n; ++j)
        for (int i = 0; i < grid.n; ++i) {
            size_t k = grid.idx(i, j);
            if (!grid.mask[k]) init.v[k] = free_kernel(t0, x, grid.node_point(i, j));
        }
    return heat_solve(grid, init, t_grid, opt);
}

Field laplace_harmonic(const Grid& grid, FarField far, const LaplaceOptions& opt) {
    const int n = grid.n;
    auto boundary_value = [&](double x1, double x2) -> double {
        switch (far) {
            case FarField::AbsXd: return std::abs(x2);
            case FarField::XdPlus: return std::max(x2, 0.0);
            case FarField::XdMinus: return std::max(-x2, 0.0);
            case FarField::Custom: return opt.custom(x1, x2);
        }
        return 0;
    };
    Field f;
    f.t = 0;
    f.v.assign(grid.mask.size(), 0.0);
    // Outer boundary carries the far-field data; interior mask nodes stay 0.
    for (int i = 0; i < n; ++i) {
        f.v[grid.idx(i, 0)] = boundary_value(grid.coord(i), -grid.L);
        f.v[grid.idx(i, n - 1)] = boundary_value(grid.coord(i), grid.L);
        f.v[grid.idx(0, i)] = boundary_value(-grid.L, grid.coord(i));
        f.v[grid.idx(n - 1, i)] = boundary_value(grid.L, grid.coord(i));
    }
    // Interior warm start with the far-field profile shortens the transient.
    for (int j = 1; j < n - 1; ++j)
        for (int i = 1; i < n - 1; ++i)
            if (!grid.mask[grid.idx(i, j)])
                f.v[grid.idx(i, j)] = boundary_value(grid.coord(i), grid.coord(j));

    const double omega = 2.0 / (1.0 + std::sin(M_PI / (n - 1)));
    double* u = f.v.data();
    const uint8_t* mask = grid.mask.data();
    long iter = 0;
    std::vector<double> residual_history;
    while (iter < opt.max_iters) {
        for (int color = 0; color < 2; ++color) {
            for (int j = 1; j < n - 1; ++j) {
                int i = 1 + ((j + color) & 1);
                for (; i < n - 1; i += 2) {
                    size_t k = grid.idx(i, j);
                    if (mask[k]) continue;
                    double nb = u[k - 1] + u[k + 1] + u[k - n] + u[k + n];
                    u[k] += omega * (0.25 * nb - u[k]);
                }
            }
        }
        ++iter;
        if (iter % 50 == 0 || iter == opt.max_iters) {
            double res = 0, umax = 0;
            for (int j = 1; j < n - 1; ++j)
                for (int i = 1; i < n - 1; ++i) {
                    size_t k = grid.idx(i, j);
                    if (mask[k]) continue;
                    double r = 0.25 * (u[k - 1] + u[k + 1] + u[k - n] + u[k + n]) - u[k];
                    res = std::max(res, std::abs(r));
                    umax = std::max(umax, std::abs(u[k]));
                }
            residual_history.push_back(res);
            if (res <= opt.rel_residual * std::max(umax, 1e-300)) return f;
        }
    }
    std::ostringstream msg;
    msg << "Laplace relaxation did not converge in " << opt.max_iters << " sweeps; residuals:";
    for (size_t k = residual_history.size() > 8 ? residual_history.size() - 8 : 0;
         k < residual_history.size(); ++k)
        msg << " " << residual_history[k];
    throw std::runtime_error(msg.str());
}

HarmonicProfile harmonic_profiles(const Grid& grid, const LaplaceOptions& opt) {
    HarmonicProfile p;
    p.v_s = laplace_harmonic(grid, FarField::AbsXd, opt);
    p.u1 = laplace_harmonic(grid, FarField::XdPlus, opt);
    p.u2 = laplace_harmonic(grid, FarField::XdMinus, opt);
    return p;
}

double field_at(const Grid& grid, const std::vector<double>& v, const Point& p) {
    double fi = (p.c[0] + grid.L) / grid.dx;
    double fj = (p.c[1] + grid.L) / grid.dx;
    int i = std::clamp(static_cast<int>(std::floor(fi)), 0, grid.n - 2);
    int j = std::clamp(static_cast<int>(std::floor(fj)), 0, grid.n - 2);
    double a = fi - i, b = fj - j;
    return (1 - a) * (1 - b) * v[grid.idx(i, j)] + a * (1 - b) * v[grid.idx(i + 1, j)] +
           (1 - a) * b * v[grid.idx(i, j + 1)] + a * b * v[grid.idx(i + 1, j + 1)];
}

double field_at(const Grid& grid, const Field& f, const Point& p) {
    return field_at(grid, f.v, p);
}

double field_mass(const Grid& grid, const Field& f) {
    double s = 0;
    for (double v : f.v) s += v;
    return s * grid.dx * grid.dx;
}

double duhamel_rhs(const Grid& grid, const LineTrace& trace, const Point& x, const Point& y,
                   double t) {
    if (x.xd() == 0) throw std::invalid_argument("duhamel_rhs needs x off the hyperplane");
    const double a = std::abs(x.xd());  // mirrored formulation for x_d < 0
    const double u_min = a * a / (2.0 * t);
    const double u_max = u_min + 40.0;
    const int nu = 400;
    const double du = (u_max - u_min) / nu;
    const size_t nd = grid.line_d_nodes.size();

    // p_s at the line D-nodes, linear in s; zero before the trace starts.
    auto line_values = [&](double s, std::vector<double>& out) {
        out.assign(nd, 0.0);
        if (trace.times.empty() || s < trace.times.front()) return;
        auto it = std::lower_bound(trace.times.begin(), trace.times.end(), s);
        size_t k1 = std::min<size_t>(it - trace.times.begin(), trace.times.size() - 1);
        size_t k0 = k1 > 0 ? k1 - 1 : 0;
        double t0 = trace.times[k0], t1 = trace.times[k1];
        double w = t1 > t0 ? (s - t0) / (t1 - t0) : 0.0;
        w = std::clamp(w, 0.0, 1.0);
        for (size_t m = 0; m < nd; ++m)
            out[m] = (1 - w) * trace.values[k0][m] + w * trace.values[k1][m];
    };

    std::vector<double> pvals;
    double integral = 0;
    for (int k = 0; k <= nu; ++k) {
        const double u = u_min + k * du;
        const double s = t - a * a / (2.0 * u);
        line_values(s, pvals);
        // Inner integral over D, trapezoid within contiguous node runs.
        double inner = 0;
        for (size_t m = 0; m < nd; ++m) {
            double xi = grid.coord(grid.line_d_nodes[m]);
            double dxi = x.c[0] - xi;
            double w = 1.0;
            bool left_edge = m == 0 || grid.line_d_nodes[m - 1] != grid.line_d_nodes[m] - 1;
            bool right_edge =
                m + 1 == nd || grid.line_d_nodes[m + 1] != grid.line_d_nodes[m] + 1;
            if (left_edge && right_edge)
                w = 1.0;
            else if (left_edge || right_edge)
                w = 0.5;
            inner += w * std::exp(-dxi * dxi * u / (a * a)) * pvals[m];
        }
        inner *= grid.dx;
        const double wk = (k == 0 || k == nu) ? 0.5 : 1.0;
        integral += wk * std::exp(-u) * inner;
    }
    integral *= du;
    // d = 2 substitution u = x_d^2 / 2(t-s) collapses the prefactors to
    // (x_d / 2 pi) (2 / x_d^2).
    const double boundary_term = (a / kTwoPi) * (2.0 / (a * a)) * integral;
    return halfspace_kernel(t, x, y) + boundary_term;
}

}  // namespace bene
