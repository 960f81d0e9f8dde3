#ifndef BEAMLAB_FFT_HPP
#define BEAMLAB_FFT_HPP

#include <complex>
#include <vector>

namespace beamlab {

/// In-place iterative radix-2 FFT; size must be a power of two.
/// inverse = true applies the conjugate transform with 1/n scaling.
void fft(std::vector<std::complex<double>>& a, bool inverse);

/// Smallest power of two >= n.
int next_pow2(int n);

bool is_pow2(int n);

} // namespace beamlab

#endif
