#ifndef BEAMLAB_FIXED_POINT_HPP
#define BEAMLAB_FIXED_POINT_HPP

#include <utility>
#include <vector>

#include "beamlab/linear_solver.hpp"
#include "beamlab/mollifier.hpp"
#include "beamlab/scenario.hpp"
#include "beamlab/state_history.hpp"
#include "beamlab/truncation.hpp"

namespace beamlab {

/// Exponentially weighted sup norms used as the contraction metric.
struct WeightedNormParams {
    double lambda = 0.0;
    enum class Mode { plain, graph } mode = Mode::graph;
};

/// plain: sup_{s<=t} e^{-lambda s} ||u(s)||_L2
/// graph: sup_{s<=t} e^{-lambda s} (||u(s)||_H2 + ||u_t(s)||_L2)
double weighted_norm(const StateHistory& h, const WeightedNormParams& params, double t);

/// Series mode: sup_{s<=t} e^{-lambda s} series[n(s)] for per-frame scalars.
double weighted_norm(const std::vector<double>& series, const TimeAxis& axis, double lambda, double t);

/// The nonlinear map: per frame,
///   C(v) = ([ (phi_R(v * theta') - nu p) (v * theta'') ] * theta + h_eps) F.
TimeSeriesField apply_C(const StateHistory& v, const Mollifier& m, const Truncation& trunc, const Scenario& scn);

/// R = bound_C / epsilon in auto mode, the configured radius otherwise.
double resolve_R(const RegularizationParams& reg, double epsilon, double bound_C);

/// lambda = max(1, 4 gain^2), the rate suggested by a measured amplification.
double lambda_from_gain(double gain);

/// Measures the amplification of the composed map B_T C on two probe
/// trajectories (linear solves driven by unit-scaled forcings) and converts it
/// with lambda_from_gain. Scale-invariant by construction.
double lambda_auto(const Scenario& scn, const Mollifier& m, const Truncation& trunc, const Grid& grid,
                   const TimeAxis& axis, const SolverOptions& opts = {});

struct PicardReport {
    int iterates_used = 0;
    std::vector<double> diffs;  // successive differences in the stopping metric
    std::vector<double> ratios; // diffs[k] / diffs[k-1]
    double lambda_used = 0.0;
    double ball_radius_2MR = 0.0;
    double max_weighted_norm = 0.0; // largest ||iterate||_{1,lambda,T}
    bool inside_ball = false;
    double fixed_point_residual = 0.0; // a posteriori ||B(C(u)) - u||
    double contraction_max = 0.0;
    bool half_factor_observed = false; // every ratio <= 1/2 (reported, not required)
    bool converged = false;
};

/// Non-convergence or divergence of the iteration, with the partial report.
class PicardFailure : public Error {
public:
    PicardFailure(const std::string& what, PicardReport report)
        : Error(what), report_(std::move(report)) {}
    const PicardReport& report() const { return report_; }

private:
    PicardReport report_;
};

/// Picard iteration v_{k+1} = B_T(C(v_k)) from the nonlinearity-free linear
/// solve, with mollified initial data. reg must be resolved: R and lambda
/// concrete. Throws PicardFailure on divergence or iteration exhaustion.
std::pair<StateHistory, PicardReport> picard_solve(const Scenario& scn, const RegularizationParams& reg,
                                                   const Grid& grid, const TimeAxis& axis,
                                                   const SolverOptions& opts = {});

/// max_t || u(t) * theta_eps' ||_inf, the post-run de-truncation scan:
/// phi_R was inactive on the whole trajectory iff this is <= R.
double max_convolved_slope(const StateHistory& h, const Mollifier& m);

} // namespace beamlab

#endif
