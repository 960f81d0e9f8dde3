#include "beamlab/truncation.hpp"

#include <cmath>

#include "beamlab/errors.hpp"

namespace beamlab {

namespace {

double eval_poly(const double* c, int n, double u) {
    double v = c[n - 1];
    for (int k = n - 2; k >= 0; --k) v = v * u + c[k];
    return v;
}

} // namespace

Truncation::Truncation(double R) : R_(R) {
    BEAMLAB_REQUIRE(R > 0.0, "truncation: R must be positive, got " << R);

    // Quintic Hermite blend in u = x - R matching value/slope/curvature of
    // x^2 at u = 0 and of the plateau (R+1)^2 at u = 2.
    blend_ = {R * R, 2.0 * R, 1.0, -(4.0 * R + 2.0) / 8.0, (2.0 * R - 3.0) / 16.0, 1.0 / 16.0};

    psi_at_R_ = R * R * R / 3.0;
    mu_at_R_ = R * R * R * R / 12.0;

    blend_psi_[0] = psi_at_R_;
    for (int k = 0; k < 6; ++k) blend_psi_[static_cast<size_t>(k + 1)] = blend_[static_cast<size_t>(k)] / (k + 1);

    blend_mu_[0] = mu_at_R_;
    blend_mu_[1] = psi_at_R_;
    for (int k = 0; k < 6; ++k)
        blend_mu_[static_cast<size_t>(k + 2)] = blend_[static_cast<size_t>(k)] / ((k + 1) * (k + 2));

    psi_at_Rp2_ = eval_poly(blend_psi_.data(), 7, 2.0);
    mu_at_Rp2_ = eval_poly(blend_mu_.data(), 8, 2.0);

    // The blend is nondecreasing for every R > 0; verify on a fine sample anyway.
    double prev = phi(R);
    for (int i = 1; i <= 2048; ++i) {
        const double cur = phi(R + 2.0 * i / 2048.0);
        BEAMLAB_REQUIRE(cur >= prev - 1e-12 * plateau(),
                        "truncation: blend not monotone at R = " << R << " (sample " << i << ")");
        prev = cur;
    }
}

double Truncation::phi(double x) const {
    const double a = std::fabs(x);
    if (a <= R_) return a * a;
    if (a >= R_ + 2.0) return plateau();
    return eval_poly(blend_.data(), 6, a - R_);
}

double Truncation::psi(double x) const {
    const double a = std::fabs(x);
    double v;
    if (a <= R_) {
        v = a * a * a / 3.0;
    } else if (a < R_ + 2.0) {
        v = eval_poly(blend_psi_.data(), 7, a - R_);
    } else {
        v = psi_at_Rp2_ + plateau() * (a - R_ - 2.0);
    }
    return x < 0.0 ? -v : v; // psi is odd
}

double Truncation::mu(double x) const {
    const double a = std::fabs(x); // mu is even
    if (a <= R_) return a * a * a * a / 12.0;
    if (a < R_ + 2.0) return eval_poly(blend_mu_.data(), 8, a - R_);
    const double w = a - R_ - 2.0;
    return mu_at_Rp2_ + psi_at_Rp2_ * w + 0.5 * plateau() * w * w;
}

} // namespace beamlab
