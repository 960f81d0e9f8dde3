#include "beamlab/convolve.hpp"

#include <cmath>

#include "beamlab/errors.hpp"

namespace beamlab {

void convolve_into(const Field& f, const Mollifier& m, int derivative_order, Field& out) {
    const double dx = f.grid.dx();
    BEAMLAB_REQUIRE(std::fabs(dx - m.spacing()) <= 1e-12 * dx,
                    "convolve: field spacing " << dx << " does not match kernel spacing " << m.spacing());
    BEAMLAB_REQUIRE(out.grid == f.grid, "convolve: output grid mismatch");

    const std::vector<double>& kern = m.samples(derivative_order);
    const int hw = m.half_width();
    const int n = f.size();

    // (f * k)(x_i) = sum_j f(x_i - j dx) k(j dx) dx; the table end samples are
    // zero, so trapezoid weights reduce to the plain sum.
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        const int j_lo = std::max(-hw, i - (n - 1));
        const int j_hi = std::min(hw, i);
        for (int j = j_lo; j <= j_hi; ++j) acc += f[i - j] * kern[static_cast<size_t>(j + hw)];
        out[i] = acc * dx;
    }
}

Field convolve(const Field& f, const Mollifier& m, int derivative_order) {
    Field out(f.grid);
    convolve_into(f, m, derivative_order, out);
    return out;
}

} // namespace beamlab
