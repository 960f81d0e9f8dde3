#ifndef BEAMLAB_BUMP_HPP
#define BEAMLAB_BUMP_HPP

#include <cmath>

namespace beamlab {

// The standard compactly supported bump exp(-1/(1-s^2)) on (-1,1) and its
// first two derivatives in closed form. Everything that needs a smooth
// cutoff (mollifier kernel, test functions, scenario expressions) shares
// these evaluations so derivative identities hold exactly.

/// exp(-1/(1-s^2)) for |s| < 1, zero otherwise.
inline double bump(double s) {
    const double q = 1.0 - s * s;
    if (q <= 0.0) return 0.0;
    return std::exp(-1.0 / q);
}

/// First derivative of bump().
inline double bump_d1(double s) {
    const double q = 1.0 - s * s;
    if (q <= 0.0) return 0.0;
    return std::exp(-1.0 / q) * (-2.0 * s) / (q * q);
}

/// Second derivative of bump().
inline double bump_d2(double s) {
    const double q = 1.0 - s * s;
    if (q <= 0.0) return 0.0;
    const double q2 = q * q;
    return std::exp(-1.0 / q) * (4.0 * s * s / (q2 * q2) - 2.0 / q2 - 8.0 * s * s / (q2 * q));
}

/// Integral of bump() over (-1,1); pinned from adaptive quadrature.
inline constexpr double kBumpIntegral = 0.44399381616807942;

/// 1 / kBumpIntegral, the factor that normalizes bump() to unit mass.
inline constexpr double kBumpNormalizer = 2.2522836210435813;

/// Quintic smoothstep: 0 for t <= 0, 1 for t >= 1, C^2 across the joins.
inline double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

/// First derivative of smoothstep().
inline double smoothstep_d1(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return t * t * (30.0 + t * (-60.0 + 30.0 * t));
}

/// Second derivative of smoothstep().
inline double smoothstep_d2(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return t * (60.0 + t * (-180.0 + 120.0 * t));
}

} // namespace beamlab

#endif
