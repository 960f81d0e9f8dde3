#include "beamlab/mollifier.hpp"

#include <cmath>

#include "beamlab/bump.hpp"
#include "beamlab/errors.hpp"

namespace beamlab {

Mollifier::Mollifier(double epsilon, double spacing) : epsilon_(epsilon), spacing_(spacing) {
    BEAMLAB_REQUIRE(epsilon > 0.0, "mollifier: epsilon must be positive, got " << epsilon);
    BEAMLAB_REQUIRE(spacing > 0.0, "mollifier: spacing must be positive, got " << spacing);
    BEAMLAB_REQUIRE(epsilon >= 4.0 * spacing,
                    "mollifier: kernel under-resolved, epsilon = " << epsilon << " needs spacing <= "
                    << epsilon / 4.0 << " but grid has " << spacing);

    // One extra sample past the support edge keeps the end values exactly zero,
    // so trapezoid weighting over the table reduces to a plain sum.
    half_width_ = static_cast<int>(std::ceil(epsilon / spacing));
    const int m = 2 * half_width_ + 1;
    table0_.resize(static_cast<size_t>(m));
    table1_.resize(static_cast<size_t>(m));
    table2_.resize(static_cast<size_t>(m));
    for (int j = -half_width_; j <= half_width_; ++j) {
        const double x = j * spacing;
        table0_[static_cast<size_t>(j + half_width_)] = evaluate(0, x);
        table1_[static_cast<size_t>(j + half_width_)] = evaluate(1, x);
        table2_[static_cast<size_t>(j + half_width_)] = evaluate(2, x);
    }

    // Renormalize the order-0 table so the discrete mass is exactly 1; the
    // closed-form samples alone only integrate to 1 up to quadrature error.
    double mass = 0.0;
    for (double v : table0_) mass += v;
    mass *= spacing;
    BEAMLAB_REQUIRE(mass > 0.0, "mollifier: degenerate sample mass");
    for (double& v : table0_) v /= mass;
}

double Mollifier::evaluate(int derivative_order, double x) const {
    const double s = x / epsilon_;
    switch (derivative_order) {
        case 0: return kBumpNormalizer * bump(s) / epsilon_;
        case 1: return kBumpNormalizer * bump_d1(s) / (epsilon_ * epsilon_);
        case 2: return kBumpNormalizer * bump_d2(s) / (epsilon_ * epsilon_ * epsilon_);
        default: BEAMLAB_REQUIRE(false, "mollifier: derivative order must be 0, 1 or 2, got " << derivative_order);
    }
    return 0.0;
}

double Mollifier::base_normalizer() { return kBumpNormalizer; }

double Mollifier::peak() const { return kBumpNormalizer * std::exp(-1.0) / epsilon_; }

const std::vector<double>& Mollifier::samples(int derivative_order) const {
    switch (derivative_order) {
        case 0: return table0_;
        case 1: return table1_;
        case 2: return table2_;
        default: BEAMLAB_REQUIRE(false, "mollifier: derivative order must be 0, 1 or 2, got " << derivative_order);
    }
    return table0_;
}

} // namespace beamlab
