#ifndef BEAMLAB_NORMS_HPP
#define BEAMLAB_NORMS_HPP

#include <cmath>
#include <vector>

#include "beamlab/grid.hpp"

namespace beamlab {

// Discrete norms and difference stencils shared by the solver, the fixed
// point iteration and the diagnostics. All quadrature is trapezoid; all
// stencils are second order, one-sided at the grid ends.

/// Trapezoid integral of the sampled values.
inline double integrate(const Field& f) {
    const double dx = f.grid.dx();
    double s = 0.5 * (f[0] + f[f.size() - 1]);
    for (int i = 1; i < f.size() - 1; ++i) s += f[i];
    return s * dx;
}

inline double l2_norm_sq(const Field& f) {
    const double dx = f.grid.dx();
    const int n = f.size();
    double s = 0.5 * (f[0] * f[0] + f[n - 1] * f[n - 1]);
    for (int i = 1; i < n - 1; ++i) s += f[i] * f[i];
    return s * dx;
}

inline double l2_norm(const Field& f) { return std::sqrt(l2_norm_sq(f)); }

inline double linf_norm(const Field& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::fabs(v));
    return m;
}

/// First derivative, central in the interior, second-order one-sided at the ends.
inline Field derivative(const Field& f) {
    const int n = f.size();
    const double dx = f.grid.dx();
    Field d(f.grid);
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx);
    for (int i = 1; i < n - 1; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * dx);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dx);
    return d;
}

/// Second derivative, central in the interior, second-order one-sided at the ends.
inline Field second_derivative(const Field& f) {
    const int n = f.size();
    const double dx2 = f.grid.dx() * f.grid.dx();
    Field d(f.grid);
    d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / dx2;
    for (int i = 1; i < n - 1; ++i) d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / dx2;
    d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / dx2;
    return d;
}

/// Discrete H^2 norm: (||f||^2 + ||f'||^2 + ||f''||^2)^(1/2).
inline double h2_norm(const Field& f) {
    const double a = l2_norm_sq(f);
    const double b = l2_norm_sq(derivative(f));
    const double c = l2_norm_sq(second_derivative(f));
    return std::sqrt(a + b + c);
}

/// Trapezoid-in-time L^2(0,t_n; L^2) norm of a series, from per-frame L^2 norms.
inline double l2l2_norm(const std::vector<double>& frame_l2, int n, double dt) {
    if (n <= 0) return 0.0;
    double s = 0.5 * (frame_l2[0] * frame_l2[0] + frame_l2[static_cast<size_t>(n)] * frame_l2[static_cast<size_t>(n)]);
    for (int j = 1; j < n; ++j) s += frame_l2[static_cast<size_t>(j)] * frame_l2[static_cast<size_t>(j)];
    return std::sqrt(s * dt);
}

/// Cubic (4-point Lagrange) interpolation of a field at an arbitrary point.
/// Needs one node of slack on the left and two on the right of the bracket.
inline double interpolate_cubic(const Field& f, double x) {
    const int n = f.size();
    const double dx = f.grid.dx();
    BEAMLAB_REQUIRE(x >= f.grid.x_min && x <= f.grid.x_max,
                    "interpolate: x = " << x << " outside grid [" << f.grid.x_min << ", " << f.grid.x_max << "]");
    int i = static_cast<int>(std::floor((x - f.grid.x_min) / dx));
    i = std::max(1, std::min(i, n - 3));
    const double s = (x - f.grid.x(i)) / dx; // in [0,1] away from the ends
    const double fm = f[i - 1], f0 = f[i], f1 = f[i + 1], f2 = f[i + 2];
    return fm * (-s * (s - 1.0) * (s - 2.0) / 6.0) + f0 * ((s * s - 1.0) * (s - 2.0) / 2.0) +
           f1 * (-s * (s + 1.0) * (s - 2.0) / 2.0) + f2 * (s * (s * s - 1.0) / 6.0);
}

/// Derivative of the cubic interpolant at x (exact for cubic data).
inline double interpolate_cubic_derivative(const Field& f, double x) {
    const int n = f.size();
    const double dx = f.grid.dx();
    BEAMLAB_REQUIRE(x >= f.grid.x_min && x <= f.grid.x_max,
                    "interpolate: x = " << x << " outside grid [" << f.grid.x_min << ", " << f.grid.x_max << "]");
    int i = static_cast<int>(std::floor((x - f.grid.x_min) / dx));
    i = std::max(1, std::min(i, n - 3));
    const double s = (x - f.grid.x(i)) / dx;
    const double fm = f[i - 1], f0 = f[i], f1 = f[i + 1], f2 = f[i + 2];
    const double d = fm * (-(3.0 * s * s - 6.0 * s + 2.0) / 6.0) + f0 * ((3.0 * s * s - 4.0 * s - 1.0) / 2.0) +
                     f1 * (-(3.0 * s * s - 2.0 * s - 2.0) / 2.0) + f2 * ((3.0 * s * s - 1.0) / 6.0);
    return d / dx;
}

} // namespace beamlab

#endif
