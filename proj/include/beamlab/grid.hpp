#ifndef BEAMLAB_GRID_HPP
#define BEAMLAB_GRID_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "beamlab/errors.hpp"

namespace beamlab {

/// Uniform 1-D spatial grid; nodes x_i = x_min + i*dx, i = 0..nx-1.
struct Grid {
    double x_min = 0.0;
    double x_max = 1.0;
    int nx = 0;

    Grid() = default;
    Grid(double x_min_, double x_max_, int nx_) : x_min(x_min_), x_max(x_max_), nx(nx_) {
        BEAMLAB_REQUIRE(x_min < x_max, "grid: x_min must be < x_max, got [" << x_min << ", " << x_max << "]");
        BEAMLAB_REQUIRE(nx >= 16, "grid: nx must be >= 16, got " << nx);
    }

    double dx() const { return (x_max - x_min) / (nx - 1); }
    double x(int i) const { return x_min + i * dx(); }

    bool operator==(const Grid& o) const { return x_min == o.x_min && x_max == o.x_max && nx == o.nx; }
};

/// Uniform time axis on [0,T]; nodes t_n = n*dt, n = 0..nt.
struct TimeAxis {
    double T = 1.0;
    int nt = 0;

    TimeAxis() = default;
    TimeAxis(double T_, int nt_) : T(T_), nt(nt_) {
        BEAMLAB_REQUIRE(T > 0.0, "time axis: T must be positive, got " << T);
        BEAMLAB_REQUIRE(nt >= 2, "time axis: nt must be >= 2, got " << nt);
    }

    double dt() const { return T / nt; }
    double t(int n) const { return n * dt(); }
    int steps() const { return nt + 1; } // number of stored frames

    bool operator==(const TimeAxis& o) const { return T == o.T && nt == o.nt; }
};

/// Sampled function of x on a Grid.
struct Field {
    Grid grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(const Grid& g) : grid(g), values(static_cast<size_t>(g.nx), 0.0) {}
    Field(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
        BEAMLAB_REQUIRE(static_cast<int>(values.size()) == g.nx,
                        "field: value count " << values.size() << " does not match nx " << g.nx);
    }

    /// Samples fn(x_i) at every node.
    template <typename Fn>
    static Field sample(const Grid& g, Fn&& fn) {
        Field f(g);
        for (int i = 0; i < g.nx; ++i) f.values[static_cast<size_t>(i)] = fn(g.x(i));
        return f;
    }

    double& operator[](int i) { return values[static_cast<size_t>(i)]; }
    double operator[](int i) const { return values[static_cast<size_t>(i)]; }
    int size() const { return grid.nx; }

    bool all_finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

/// Space-time sample block: one Field per time frame, stored contiguously.
struct TimeSeriesField {
    Grid grid;
    TimeAxis axis;
    std::vector<double> data; // (nt+1) x nx, frame-major

    TimeSeriesField() = default;
    TimeSeriesField(const Grid& g, const TimeAxis& ax)
        : grid(g), axis(ax), data(static_cast<size_t>(ax.steps()) * static_cast<size_t>(g.nx), 0.0) {}

    double* frame(int n) { return data.data() + static_cast<size_t>(n) * static_cast<size_t>(grid.nx); }
    const double* frame(int n) const { return data.data() + static_cast<size_t>(n) * static_cast<size_t>(grid.nx); }

    double& at(int n, int i) { return frame(n)[i]; }
    double at(int n, int i) const { return frame(n)[i]; }

    Field field_at(int n) const {
        Field f(grid);
        const double* p = frame(n);
        for (int i = 0; i < grid.nx; ++i) f[i] = p[i];
        return f;
    }

    void set_frame(int n, const Field& f) {
        BEAMLAB_REQUIRE(f.grid == grid, "time series: frame grid mismatch");
        double* p = frame(n);
        for (int i = 0; i < grid.nx; ++i) p[i] = f[i];
    }
};

} // namespace beamlab

#endif
