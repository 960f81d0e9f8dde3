#ifndef BEAMLAB_SOBOLEV_HPP
#define BEAMLAB_SOBOLEV_HPP

#include "beamlab/grid.hpp"

namespace beamlab {

/// Localized discrete H^s norm: smooth window on the compact interval
/// [a, b] strictly inside the grid, zero extension, and the Fourier symbol
/// (1 + xi^2)^(s/2) on the windowed samples.
struct SobolevNormSpec {
    double s = 0.0;     // order, in [0, 2]
    double a = 0.0;     // window interval
    double b = 0.0;
    double taper = 0.5; // width of the smooth roll-off at each end
};

double sobolev_norm(const Field& f, const SobolevNormSpec& spec);

/// The window profile itself (1 in the interior of [a,b], smooth roll-off).
double sobolev_window(const SobolevNormSpec& spec, double x);

} // namespace beamlab

#endif
