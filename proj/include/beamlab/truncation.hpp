#ifndef BEAMLAB_TRUNCATION_HPP
#define BEAMLAB_TRUNCATION_HPP

#include <array>

namespace beamlab {

/// Even cap phi_R for the cubic nonlinearity: x^2 on [0,R], the constant
/// (R+1)^2 beyond R+2, and a monotone quintic Hermite blend in between.
/// psi_R and mu_R are the first and second antiderivatives with
/// psi_R(0) = mu_R(0) = 0, evaluated from the closed-form piecewise
/// polynomials; mu_R is the nonnegative nonlinear energy density.
class Truncation {
public:
    explicit Truncation(double R);

    double radius() const { return R_; }
    double plateau() const { return (R_ + 1.0) * (R_ + 1.0); }

    double phi(double x) const;
    double psi(double x) const;
    double mu(double x) const;

private:
    double R_ = 0.0;
    // blend polynomial coefficients in u = x - R, u in [0,2]
    std::array<double, 6> blend_;     // phi
    std::array<double, 7> blend_psi_; // running integral of phi
    std::array<double, 8> blend_mu_;  // running integral of psi
    double psi_at_R_ = 0.0, mu_at_R_ = 0.0;
    double psi_at_Rp2_ = 0.0, mu_at_Rp2_ = 0.0;
};

} // namespace beamlab

#endif
