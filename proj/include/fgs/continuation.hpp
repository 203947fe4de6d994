#ifndef FGS_CONTINUATION_HPP
#define FGS_CONTINUATION_HPP

#include "fgs/ground_state.hpp"

namespace fgs {

/// Tangent du/dlambda from the linear system L+ (du/dlambda) = -u, solved on
/// the even subspace where L+ is invertible (the kernel modes are odd).
/// Returns the tangent field; predictor(u, dl) = u + dl * tangent.
Field branch_tangent(const GroundStateRecord& rec, const NonlinearitySpec& spec,
                     double tol = 1e-10, int max_iter = 2000);

struct BranchPoint {
    double lambda = 0;
    GroundStateRecord rec;
    double g = 0;           // int (f(u)u - 2F(u))
    double ratio_T_V = 0;   // kinetic / int f(u)u
    double ratio_lM_V = 0;  // lambda mass / int f(u)u
    double pohozaev = 0;
};

struct RatioBand {
    double t_lo = 0, t_hi = 0;   // admissible T/V range from the growth pinch
    double m_lo = 0, m_hi = 0;   // admissible lambda M/V range
};

/// Bands implied by Nehari membership + Pohozaev + q F <= f t <= r F.
RatioBand ratio_band(int N, double s, const NonlinearitySpec& spec);

struct BranchOptions {
    double step_frac = 0.1;    // initial d(lambda) = step_frac * lambda
    double cap_frac = 0.5;     // never step beyond cap_frac * lambda
    int max_halvings = 6;
    int easy_accepts_to_double = 3;
    int max_points = 400;
    bool rescale_grid = true;  // per-point box L = L0 * (l0/l)^{1/(2s)}
    SolverOptions solver;
};

struct BranchRecord {
    std::string parameterization; // "lambda" or "mu"
    std::vector<BranchPoint> points;
    int accepted = 0, halved = 0, doubled = 0;
    RatioBand band;
    double empirical_t_lo = 0, empirical_t_hi = 0;
    double empirical_m_lo = 0, empirical_m_hi = 0;
    bool completed = false;
    std::string stop_reason;
};

/// Predictor-corrector continuation in lambda up to lambda_max. The grid is
/// rescaled per point so that the scaling family stays equally resolved; the
/// predictor is the exact pure-power covariance (amplitude scaling plus box
/// reinterpretation), corrected by a full solve.
BranchRecord extend_branch(const GroundStateRecord& start,
                           const NonlinearitySpec& spec, double lambda_max,
                           const BranchOptions& opts = {});

/// The normalizing transform between the lambda equation and the mu =
/// lambda^{1/(r-2)} equation: forward maps u on (L, n) to
/// v(x) = mu^{-1} u(lambda^{-1/(2s)} x) on the box L * lambda^{1/(2s)} with
/// unchanged sample values up to the amplitude factor (pure grid
/// reinterpretation, no interpolation).
Field t_lambda(const GroundStateRecord& rec, double r, bool forward = true);

struct MuMonitor {
    double mu = 0, lambda = 0;
    double k = 0;          // mu^{1-r} int f(mu v) v
    double h = 0;          // 2 mu^{-r} int F(mu v)
    double B = 0;          // k - h, positive
    double bprime_closed = 0; // 2 mu^{-(r+1)} int [r F(mu v) - f(mu v) mu v]
    double mass_residual = 0; // int v - mu^{1-r} int f(mu v)
    double energy_residual = 0; // T + M - mu^{1-r} int f(mu v) v, relative
    double ratio_T_V = 0, ratio_M_V = 0;
};

/// Monitors of the rescaled family at one branch point.
MuMonitor mu_monitor(const GroundStateRecord& rec, const NonlinearitySpec& spec);

/// Gagliardo-Nirenberg quotient int |u|^p / (T^a M^b) with the scaling-
/// invariant exponents a = N(p-2)/(4s), b = p/2 - a.
double gns_ratio(const GroundStateRecord& rec, double p);

struct LimitComparePoint {
    double mu = 0;
    double l2_distance = 0;
    double hs_distance = 0;
};

/// L2 / H^s distances between rescaled branch states and the pure-power
/// limit state; both fields must share a grid.
LimitComparePoint limit_compare(const GroundStateRecord& branch_point,
                                const NonlinearitySpec& spec,
                                const Field& v_star);

} // namespace fgs

#endif
