#ifndef BEAMLAB_CONVOLVE_HPP
#define BEAMLAB_CONVOLVE_HPP

#include "beamlab/grid.hpp"
#include "beamlab/mollifier.hpp"

namespace beamlab {

/// Discrete convolution (f * theta_eps^(k))(x_i) by direct summation over the
/// kernel support, with zero extension of the field outside its grid.
/// derivative_order selects theta_eps, theta_eps' or theta_eps''.
Field convolve(const Field& f, const Mollifier& m, int derivative_order);

/// In-place variant writing into out (out may not alias f).
void convolve_into(const Field& f, const Mollifier& m, int derivative_order, Field& out);

} // namespace beamlab

#endif
