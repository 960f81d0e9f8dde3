// Independent oracles for the test suites. Everything here recomputes
// expected values from first principles (adaptive quadrature, dense
// elimination, brute-force sums, finite differences) without touching the
// library's own evaluation paths.
#ifndef BEAMLAB_TESTS_ORACLES_HPP
#define BEAMLAB_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

inline double simpson_panel(const std::function<double(double)>& f, double a, double b) {
    return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b, double whole,
                                   double tol, int depth) {
    const double c = 0.5 * (a + b);
    const double left = simpson_panel(f, a, c);
    const double right = simpson_panel(f, c, b);
    if (depth > 60 || std::fabs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, c, left, 0.5 * tol, depth + 1) +
           adaptive_simpson_rec(f, c, b, right, 0.5 * tol, depth + 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-13) {
    return adaptive_simpson_rec(f, a, b, simpson_panel(f, a, b), tol, 0);
}

/// Centered finite difference of a scalar function.
inline double central_diff(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Dense Gaussian elimination with partial pivoting; A is row-major n x n.
inline std::vector<double> dense_solve(std::vector<double> A, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int j = 0; j < n; ++j) {
        int piv = j;
        for (int i = j + 1; i < n; ++i)
            if (std::fabs(A[size_t(i) * n + j]) > std::fabs(A[size_t(piv) * n + j])) piv = i;
        if (piv != j) {
            for (int c = 0; c < n; ++c) std::swap(A[size_t(j) * n + c], A[size_t(piv) * n + c]);
            std::swap(b[size_t(j)], b[size_t(piv)]);
        }
        for (int i = j + 1; i < n; ++i) {
            const double m = A[size_t(i) * n + j] / A[size_t(j) * n + j];
            for (int c = j; c < n; ++c) A[size_t(i) * n + c] -= m * A[size_t(j) * n + c];
            b[size_t(i)] -= m * b[size_t(j)];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = b[size_t(i)];
        for (int c = i + 1; c < n; ++c) s -= A[size_t(i) * n + c] * b[size_t(c)];
        b[size_t(i)] = s / A[size_t(i) * n + i];
    }
    return b;
}

/// Brute-force full-support discrete convolution with a sampled kernel:
/// out_i = sum_j f_j k(x_i - x_j) dx over the whole grid, zero extension.
inline std::vector<double> full_convolve(const std::vector<double>& f, double dx,
                                         const std::function<double(double)>& kernel) {
    const int n = static_cast<int>(f.size());
    std::vector<double> out(f.size(), 0.0);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += f[size_t(j)] * kernel((i - j) * dx);
        out[size_t(i)] = acc * dx;
    }
    return out;
}

/// Direct O(n^2) discrete Fourier transform for checking the FFT.
inline void direct_dft(const std::vector<double>& re_in, std::vector<double>& re_out, std::vector<double>& im_out) {
    const int n = static_cast<int>(re_in.size());
    re_out.assign(re_in.size(), 0.0);
    im_out.assign(re_in.size(), 0.0);
    for (int k = 0; k < n; ++k) {
        double sr = 0.0, si = 0.0;
        for (int j = 0; j < n; ++j) {
            const double ang = -2.0 * M_PI * k * j / n;
            sr += re_in[size_t(j)] * std::cos(ang);
            si += re_in[size_t(j)] * std::sin(ang);
        }
        re_out[size_t(k)] = sr;
        im_out[size_t(k)] = si;
    }
}

/// Deterministic xorshift generator for reproducible random suites.
struct Rng {
    unsigned long long s;
    explicit Rng(unsigned long long seed) : s(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    double uniform() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return static_cast<double>(s >> 11) / 9007199254740992.0; // [0,1)
    }
    double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

} // namespace oracles

#endif
