#include "beamlab/sobolev.hpp"

#include <cmath>
#include <complex>

#include "beamlab/bump.hpp"
#include "beamlab/errors.hpp"
#include "beamlab/fft.hpp"

namespace beamlab {

double sobolev_window(const SobolevNormSpec& spec, double x) {
    return smoothstep((x - spec.a) / spec.taper) * smoothstep((spec.b - x) / spec.taper);
}

double sobolev_norm(const Field& f, const SobolevNormSpec& spec) {
    const Grid& grid = f.grid;
    const double dx = grid.dx();
    BEAMLAB_REQUIRE(spec.s >= 0.0 && spec.s <= 2.0, "sobolev: order s = " << spec.s << " outside [0,2]");
    BEAMLAB_REQUIRE(spec.a < spec.b, "sobolev: empty window [" << spec.a << ", " << spec.b << "]");
    BEAMLAB_REQUIRE(spec.taper > 0.0, "sobolev: taper must be positive");
    BEAMLAB_REQUIRE(spec.a > grid.x_min + dx && spec.b < grid.x_max - dx,
                    "sobolev: window [" << spec.a << ", " << spec.b << "] touches the grid boundary");

    const int ia = static_cast<int>(std::ceil((spec.a - grid.x_min) / dx - 1e-12));
    const int ib = static_cast<int>(std::floor((spec.b - grid.x_min) / dx + 1e-12));
    const int m = ib - ia + 1;
    BEAMLAB_REQUIRE(m >= 8, "sobolev: window resolves only " << m << " samples");

    // windowed samples, zero-padded to a power of two
    const int M = next_pow2(m);
    std::vector<std::complex<double>> z(static_cast<size_t>(M), 0.0);
    for (int i = 0; i < m; ++i) {
        const double x = grid.x(ia + i);
        z[static_cast<size_t>(i)] = f[ia + i] * sobolev_window(spec, x);
    }
    fft(z, false);

    // hat(g)(xi_j) ~ dx * DFT; Parseval: ||g||_L2^2 = (1/L) sum |hat(g)|^2
    const double L = M * dx;
    double acc = 0.0;
    for (int j = 0; j < M; ++j) {
        const int jj = j <= M / 2 ? j : j - M;
        const double xi = 2.0 * M_PI * jj / L;
        const double sym = std::pow(1.0 + xi * xi, spec.s);
        acc += sym * std::norm(z[static_cast<size_t>(j)]);
    }
    return std::sqrt(acc * dx * dx / L);
}

} // namespace beamlab
