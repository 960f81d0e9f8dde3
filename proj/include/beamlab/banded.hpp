#ifndef BEAMLAB_BANDED_HPP
#define BEAMLAB_BANDED_HPP

#include <vector>

namespace beamlab {

/// Banded matrix in LAPACK band storage with room for the fill-in rows that
/// partial pivoting needs. Entry (i,j) with |i-j| <= band lives at
/// ab[(kl + ku + i - j) * n + j].
class BandedMatrix {
public:
    BandedMatrix(int n, int kl, int ku);

    int size() const { return n_; }
    void clear();

    double& at(int i, int j);
    double at(int i, int j) const;

    /// LU factorization with partial pivoting (dgbtrf-style). Throws on a
    /// numerically singular pivot.
    void factorize();

    /// Solves A x = b in place using the factorization.
    void solve(std::vector<double>& b) const;

    bool factorized() const { return factorized_; }

private:
    int n_ = 0, kl_ = 0, ku_ = 0;
    std::vector<double> ab_;  // (2*kl + ku + 1) rows by n columns
    std::vector<int> ipiv_;
    bool factorized_ = false;
};

} // namespace beamlab

#endif
