#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bene/geometry.hpp"

namespace bene {

// Uniform grid on [-L, L]^2 with the hyperplane x2 = 0 on a grid line.
// Dirichlet mask = outer box boundary plus line nodes classified InHoles.
struct Grid {
    double L = 0, dx = 0;
    int n = 0;   // nodes per side
    int j0 = 0;  // row index of the line x2 = 0
    std::vector<uint8_t> mask;  // 1 = Dirichlet node (value pinned to 0)
    std::vector<int> line_d_nodes;  // i-indices of unmasked nodes on the line (in D)
    std::string snap_report;

    int idx(int i, int j) const { return j * n + i; }
    double coord(int i) const { return -L + i * dx; }
    Point node_point(int i, int j) const { return Point{coord(i), coord(j)}; }
    // Distance from a point to the Dirichlet set (line holes + outer box).
    double mask_distance(const BenedicksDomain& dom, const Point& x) const;
};

Grid build_grid(const BenedicksDomain& dom, double L, double dx);

struct Field {
    double t = 0;
    std::vector<double> v;
};

struct HeatOptions {
    double dt = 1e-2;
    double dt_ramp = 1.0;   // multiplicative growth per step (A-stable scheme)
    double dt_max = 0.5;
    // Called after every accepted step; used for line traces.
    std::function<void(double, const std::vector<double>&)> observer;
};

// Peaceman-Rachford ADI stepping of u_t = Laplacian(u)/2 with u = 0 on the
// mask (second order, A-stable). Snapshots at the requested times, which must
// be increasing and > init.t. Aborts on max-norm growth for nonnegative data.
std::vector<Field> heat_solve(const Grid& grid, const Field& init,
                              const std::vector<double>& t_grid, const HeatOptions& opt);

// u(t, x) ~ P_x(T > t): evolve initial data 1.
std::vector<Field> survival_field(const Grid& grid, const std::vector<double>& t_grid,
                                  const HeatOptions& opt);

// Snapshots of p_t(x, .), initialized with exact free-kernel data at a small
// t0 satisfying sqrt(t0) >= 4 dx and t0 <= (dist(x, mask)/4)^2.
std::vector<Field> kernel_field(const BenedicksDomain& dom, const Grid& grid, const Point& x,
                                double t0, const std::vector<double>& t_grid,
                                const HeatOptions& opt);
// Largest admissible t0 for this start point (clamped to >= (4 dx)^2).
double pick_kernel_t0(const BenedicksDomain& dom, const Grid& grid, const Point& x);

enum class FarField { AbsXd, XdPlus, XdMinus, Custom };

struct LaplaceOptions {
    double rel_residual = 1e-10;
    long max_iters = 2000000;
    std::function<double(double, double)> custom;  // boundary data for Custom
};

// 5-point red-black SOR for Laplace's equation, u = 0 on the hole mask and the
// selected far-field data on the outer box.
Field laplace_harmonic(const Grid& grid, FarField far, const LaplaceOptions& opt = {});

struct HarmonicProfile {
    Field v_s, u1, u2;
};

HarmonicProfile harmonic_profiles(const Grid& grid, const LaplaceOptions& opt = {});

// Bilinear interpolation of a field at an interior point.
double field_at(const Grid& grid, const Field& f, const Point& p);
double field_at(const Grid& grid, const std::vector<double>& v, const Point& p);

// Discrete mass dx^2 * sum(v).
double field_mass(const Grid& grid, const Field& f);

// Time series of the kernel values at the line nodes in D, recorded every
// solver step; input to the Duhamel quadrature.
struct LineTrace {
    std::vector<double> times;
    std::vector<std::vector<double>> values;  // values[k][m] at line_d_nodes[m]
};

// Right-hand side of the Duhamel identity: same-side half-space term plus the
// boundary integral over D of earlier kernel values p_s((xi,0), y).
double duhamel_rhs(const Grid& grid, const LineTrace& trace, const Point& x, const Point& y,
                   double t);

}  // namespace bene
