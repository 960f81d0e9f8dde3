#ifndef BEAMLAB_MOLLIFIER_HPP
#define BEAMLAB_MOLLIFIER_HPP

#include <vector>

#include "beamlab/grid.hpp"

namespace beamlab {

/// Scaled bump kernel theta_eps(x) = theta(x/eps)/eps, where theta is the
/// standard bump exp(-1/(1-s^2)) normalized to unit mass. Evaluations of the
/// kernel and its first two derivatives are closed-form; the sampled tables
/// drive the discrete convolution.
class Mollifier {
public:
    /// Builds the kernel for fields with the given spacing.
    /// Requires epsilon >= 4*spacing so the support carries enough samples.
    Mollifier(double epsilon, double spacing);

    double epsilon() const { return epsilon_; }
    double spacing() const { return spacing_; }

    /// Closed-form kernel value: theta_eps, theta_eps' or theta_eps''.
    /// Zero outside (-eps, eps) for every order.
    double evaluate(int derivative_order, double x) const;

    /// Normalizer of the base bump, 1/int_{-1}^{1} exp(-1/(1-s^2)) ds.
    static double base_normalizer();

    /// Kernel peak theta_eps(0).
    double peak() const;

    // Sample tables at offsets j*spacing, j = -half_width()..half_width().
    // Order 0 is renormalized so its trapezoid mass is exactly 1; orders 1
    // and 2 are raw closed-form samples (order 1 has exact zero mean by
    // odd symmetry).
    int half_width() const { return half_width_; }
    const std::vector<double>& samples(int derivative_order) const;

private:
    double epsilon_ = 0.0;
    double spacing_ = 0.0;
    int half_width_ = 0;
    std::vector<double> table0_, table1_, table2_;
};

} // namespace beamlab

#endif
