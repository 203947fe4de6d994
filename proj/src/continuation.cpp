#include "fgs/continuation.hpp"
#include "fgs/eigensolvers.hpp"
#include "fgs/spectrum.hpp"

#include <cmath>

namespace fgs {

Field branch_tangent(const GroundStateRecord& rec, const NonlinearitySpec& spec,
                     double tol, int max_iter) {
    const Grid grid = rec.u.grid;
    LinearOp lplus = make_lplus(rec, spec);
    auto project = [grid](const Array& v) {
        Field tmp(grid, v);
        return symmetrize_even(tmp).values;
    };
    auto op = [&](const Array& v) { return project(lplus(project(v))); };
    const double s = rec.s, lambda = rec.lambda;
    auto precond = [&grid, s, lambda](const Array& v) {
        Field tmp(grid, v);
        return invert_helmholtz(tmp, s, lambda).values;
    };
    Array rhs = -rec.u.values;
    Array x = Array::Zero(grid.size());
    IterativeResult res = minres(op, rhs, x, precond, tol, max_iter);
    if (!res.converged)
        throw std::runtime_error("branch_tangent: linear solve stalled (residual " +
                                 std::to_string(res.residual) + ")");
    return Field(grid, project(x));
}

RatioBand ratio_band(int N, double s, const NonlinearitySpec& spec) {
    // Nehari: T + lambda M = V;  Pohozaev: (N-2s) T + N lambda M = 2N int F;
    // with V/r <= int F <= V/q this pins T/V and lambda M/V.
    RatioBand band;
    band.t_lo = N * (1.0 - 2.0 / spec.q) / (2.0 * s);
    band.t_hi = N * (1.0 - 2.0 / spec.r) / (2.0 * s);
    band.m_lo = 1.0 - band.t_hi;
    band.m_hi = 1.0 - band.t_lo;
    return band;
}

namespace {

BranchPoint make_point(const GroundStateRecord& rec, const NonlinearitySpec& spec) {
    BranchPoint pt;
    pt.lambda = rec.lambda;
    pt.rec = rec;
    const double vol = rec.u.grid.cell_volume();
    const double V = vol * (spec.f_of(rec.u.values) * rec.u.values).sum();
    pt.g = V - 2.0 * rec.potential;
    pt.ratio_T_V = rec.kinetic / V;
    pt.ratio_lM_V = rec.lambda * rec.mass / V;
    pt.pohozaev = pohozaev_residual(rec, spec);
    return pt;
}

} // namespace

BranchRecord extend_branch(const GroundStateRecord& start,
                           const NonlinearitySpec& spec, double lambda_max,
                           const BranchOptions& opts) {
    if (!(lambda_max > start.lambda))
        throw std::invalid_argument("extend_branch: lambda_max beyond start");
    BranchRecord branch;
    branch.parameterization = "lambda";
    branch.band = ratio_band(start.u.grid.dim, start.s, spec);

    const double s = start.s;
    const double amp_expo = 1.0 / (spec.r - 2.0);
    GroundStateRecord cur = start;
    branch.points.push_back(make_point(cur, spec));
    branch.empirical_t_lo = branch.empirical_t_hi = branch.points[0].ratio_T_V;
    branch.empirical_m_lo = branch.empirical_m_hi = branch.points[0].ratio_lM_V;

    double dl = opts.step_frac * cur.lambda;
    int easy = 0;
    while (cur.lambda < lambda_max * (1.0 - 1e-12)) {
        if (static_cast<int>(branch.points.size()) >= opts.max_points) {
            branch.stop_reason = "point budget exhausted";
            return branch;
        }
        dl = std::min({dl, opts.cap_frac * cur.lambda, lambda_max - cur.lambda});
        bool stepped = false;
        for (int attempt = 0; attempt <= opts.max_halvings; ++attempt) {
            const double lam_new = cur.lambda + dl;
            Grid g_new = cur.u.grid;
            if (opts.rescale_grid)
                g_new = make_grid(g_new.dim,
                                  g_new.half_width *
                                      std::pow(cur.lambda / lam_new, 0.5 / s),
                                  g_new.n);
            // exact pure-power covariance as the predictor; the box is
            // rescaled so this is an amplitude scaling only
            Field pred(g_new, cur.u.values * std::pow(lam_new / cur.lambda, amp_expo));
            try {
                GroundStateRecord next = solve_ground_state(
                    g_new, s, lam_new, spec, opts.solver, &pred);
                cur = next;
                stepped = true;
                break;
            } catch (const SolverError&) {
                dl *= 0.5;
                ++branch.halved;
                easy = 0;
            }
        }
        if (!stepped) {
            branch.stop_reason = "corrector failed after halving budget";
            return branch;
        }
        BranchPoint pt = make_point(cur, spec);
        branch.empirical_t_lo = std::min(branch.empirical_t_lo, pt.ratio_T_V);
        branch.empirical_t_hi = std::max(branch.empirical_t_hi, pt.ratio_T_V);
        branch.empirical_m_lo = std::min(branch.empirical_m_lo, pt.ratio_lM_V);
        branch.empirical_m_hi = std::max(branch.empirical_m_hi, pt.ratio_lM_V);
        branch.points.push_back(pt);
        ++branch.accepted;
        // the band comes from the Pohozaev identity, so the monitors can
        // only be trusted to the measured Pohozaev defect of the point
        const double band_slack = std::max(1e-4, 10.0 * std::abs(pt.pohozaev));
        if (pt.ratio_T_V < branch.band.t_lo - band_slack ||
            pt.ratio_T_V > branch.band.t_hi + band_slack ||
            pt.ratio_lM_V < branch.band.m_lo - band_slack ||
            pt.ratio_lM_V > branch.band.m_hi + band_slack) {
            branch.stop_reason = "ratio monitor left the admissible band";
            return branch;
        }
        if (++easy >= opts.easy_accepts_to_double) {
            dl *= 2.0;
            ++branch.doubled;
            easy = 0;
        }
    }
    branch.completed = true;
    branch.stop_reason = "reached lambda_max";
    return branch;
}

Field t_lambda(const GroundStateRecord& rec, double r, bool forward) {
    const Grid& g = rec.u.grid;
    const double mu = std::pow(rec.lambda, 1.0 / (r - 2.0));
    const double stretch = std::pow(rec.lambda, 0.5 / rec.s);
    Grid g2 = g;
    if (forward) {
        g2.half_width = g.half_width * stretch;
        return Field(g2, rec.u.values / mu);
    }
    g2.half_width = g.half_width / stretch;
    return Field(g2, rec.u.values * mu);
}

MuMonitor mu_monitor(const GroundStateRecord& rec, const NonlinearitySpec& spec) {
    const double r = spec.r;
    Field v = t_lambda(rec, r, true);
    MuMonitor mon;
    mon.lambda = rec.lambda;
    mon.mu = std::pow(rec.lambda, 1.0 / (r - 2.0));
    const double mu = mon.mu;
    const double vol = v.grid.cell_volume();

    Array mv = mu * v.values;
    Array f_mv = spec.f_of(mv);
    Array F_mv = spec.F_of(mv);
    const double int_fv = vol * (f_mv * v.values).sum();
    const double int_f = vol * f_mv.sum();
    const double int_F = vol * F_mv.sum();
    const double mu_pow = std::pow(mu, 1.0 - r);

    mon.k = mu_pow * int_fv;
    mon.h = 2.0 * std::pow(mu, -r) * int_F;
    mon.B = mon.k - mon.h;
    mon.bprime_closed = 2.0 * std::pow(mu, -(r + 1.0)) * (r * int_F - mu * int_fv);
    mon.mass_residual = vol * v.values.sum() - mu_pow * int_f;

    const double T = dirichlet_form(v, v, rec.s);
    const double M = vol * v.values.square().sum();
    mon.energy_residual = (T + M - mon.k) / (T + M);
    mon.ratio_T_V = T / mon.k;
    mon.ratio_M_V = M / mon.k;
    return mon;
}

double gns_ratio(const GroundStateRecord& rec, double p) {
    const int N = rec.u.grid.dim;
    const double s = rec.s;
    const double crit = (N > 2 * s) ? 2.0 * N / (N - 2.0 * s)
                                    : std::numeric_limits<double>::infinity();
    if (!(p > 2 && p < crit))
        throw std::invalid_argument("gns_ratio: exponent out of (2, 2N/(N-2s))");
    const double a = N * (p - 2.0) / (4.0 * s);
    const double b = 0.5 * p - a;
    const double num = rec.u.grid.cell_volume() * rec.u.values.abs().pow(p).sum();
    return num / (std::pow(rec.kinetic, a) * std::pow(rec.mass, b));
}

LimitComparePoint limit_compare(const GroundStateRecord& branch_point,
                                const NonlinearitySpec& spec,
                                const Field& v_star) {
    Field v = t_lambda(branch_point, spec.r, true);
    const Grid& g = v_star.grid;
    if (v.grid.dim != g.dim || v.grid.n != g.n ||
        std::abs(v.grid.half_width - g.half_width) > 1e-8 * g.half_width)
        throw std::invalid_argument("limit_compare: grids do not coincide");
    LimitComparePoint out;
    out.mu = std::pow(branch_point.lambda, 1.0 / (spec.r - 2.0));
    Field diff(g, v.values - v_star.values);
    out.l2_distance = diff.l2_norm();
    auto [semi, norm2] = hs_products(diff, diff, branch_point.s, 1.0);
    (void)semi;
    out.hs_distance = std::sqrt(norm2);
    return out;
}

} // namespace fgs
