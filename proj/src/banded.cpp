#include "beamlab/banded.hpp"

#include <cmath>

#include "beamlab/errors.hpp"

namespace beamlab {

BandedMatrix::BandedMatrix(int n, int kl, int ku) : n_(n), kl_(kl), ku_(ku) {
    BEAMLAB_REQUIRE(n > 0 && kl >= 0 && ku >= 0, "banded: bad dimensions");
    ab_.assign(static_cast<size_t>(2 * kl_ + ku_ + 1) * static_cast<size_t>(n_), 0.0);
    ipiv_.assign(static_cast<size_t>(n_), 0);
}

void BandedMatrix::clear() {
    std::fill(ab_.begin(), ab_.end(), 0.0);
    factorized_ = false;
}

double& BandedMatrix::at(int i, int j) {
    // Row kl..2kl+ku holds the matrix; rows 0..kl-1 are pivoting fill-in.
    return ab_[static_cast<size_t>(kl_ + ku_ + i - j) * static_cast<size_t>(n_) + static_cast<size_t>(j)];
}

double BandedMatrix::at(int i, int j) const {
    return ab_[static_cast<size_t>(kl_ + ku_ + i - j) * static_cast<size_t>(n_) + static_cast<size_t>(j)];
}

void BandedMatrix::factorize() {
    // Band Gaussian elimination with partial pivoting. The pivot search is
    // restricted to the kl rows below the diagonal, so fill stays within the
    // widened band (ku + kl superdiagonals).
    const int kv = kl_ + ku_;
    auto entry = [&](int r, int c) -> double& {
        return ab_[static_cast<size_t>(kv + r - c) * static_cast<size_t>(n_) + static_cast<size_t>(c)];
    };

    for (int j = 0; j < n_; ++j) {
        const int pmax = std::min(kl_, n_ - 1 - j);
        int piv = j;
        double best = std::fabs(entry(j, j));
        for (int r = 1; r <= pmax; ++r) {
            const double v = std::fabs(entry(j + r, j));
            if (v > best) {
                best = v;
                piv = j + r;
            }
        }
        BEAMLAB_REQUIRE(best > 0.0, "banded: singular matrix at column " << j);
        ipiv_[static_cast<size_t>(j)] = piv;
        const int cmax = std::min(j + kv, n_ - 1); // widened band after pivoting

        if (piv != j) {
            for (int c = j; c <= cmax; ++c) {
                const int up = kv + j - c, lo = kv + piv - c;
                if (up < 0 || lo > 2 * kl_ + ku_) continue;
                std::swap(ab_[static_cast<size_t>(up) * static_cast<size_t>(n_) + static_cast<size_t>(c)],
                          ab_[static_cast<size_t>(lo) * static_cast<size_t>(n_) + static_cast<size_t>(c)]);
            }
        }
        const double d = entry(j, j);
        for (int r = 1; r <= pmax; ++r) {
            const double m = entry(j + r, j) / d;
            entry(j + r, j) = m;
            for (int c = j + 1; c <= cmax; ++c) {
                const int up = kv + j - c;
                if (up < 0) break;
                entry(j + r, c) -= m * ab_[static_cast<size_t>(up) * static_cast<size_t>(n_) + static_cast<size_t>(c)];
            }
        }
    }
    factorized_ = true;
}

void BandedMatrix::solve(std::vector<double>& b) const {
    BEAMLAB_REQUIRE(factorized_, "banded: solve before factorize");
    BEAMLAB_REQUIRE(static_cast<int>(b.size()) == n_, "banded: rhs size mismatch");
    const int kv = kl_ + ku_;
    auto entry = [&](int r, int c) -> double {
        return ab_[static_cast<size_t>(kv + r - c) * static_cast<size_t>(n_) + static_cast<size_t>(c)];
    };

    for (int j = 0; j < n_; ++j) {
        const int piv = ipiv_[static_cast<size_t>(j)];
        if (piv != j) std::swap(b[static_cast<size_t>(j)], b[static_cast<size_t>(piv)]);
        const int rmax = std::min(kl_, n_ - 1 - j);
        for (int r = 1; r <= rmax; ++r) b[static_cast<size_t>(j + r)] -= entry(j + r, j) * b[static_cast<size_t>(j)];
    }
    for (int i = n_ - 1; i >= 0; --i) {
        const int cmax = std::min(i + kv, n_ - 1);
        double s = b[static_cast<size_t>(i)];
        for (int c = i + 1; c <= cmax; ++c) s -= entry(i, c) * b[static_cast<size_t>(c)];
        b[static_cast<size_t>(i)] = s / entry(i, i);
    }
}

} // namespace beamlab
