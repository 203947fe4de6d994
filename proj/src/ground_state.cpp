#include "fgs/ground_state.hpp"
#include "fgs/eigensolvers.hpp"

#include <fftw3.h>
#include <cmath>
#include <map>

namespace fgs {

namespace {

double constraint_gap(const Field& u, double t, double norm2_lambda,
                      const NonlinearitySpec& spec) {
    // psi(t) = t^2 |u|^2 - int f(tu) tu; decreasing-to-negative in t
    Array tu = t * u.values;
    double nl = u.grid.cell_volume() * (spec.f_of(tu) * tu).sum();
    return t * t * norm2_lambda - nl;
}

} // namespace

double nehari_project(const Field& u, double s, double lambda,
                      const NonlinearitySpec& spec) {
    const double norm2 = hs_products(u, u, s, lambda).second;
    if (!(norm2 > 0)) throw std::invalid_argument("nehari_project: zero field");
    if (spec.kind == "pure_power") {
        const double r = spec.r;
        const double p = u.grid.cell_volume() * u.values.abs().pow(r).sum();
        if (!(p > 0)) throw std::invalid_argument("nehari_project: degenerate field");
        return std::pow(norm2 / p, 1.0 / (r - 2.0));
    }
    double t_lo = 1e-9, t_hi = 1.0;
    if (constraint_gap(u, t_lo, norm2, spec) <= 0)
        throw std::invalid_argument("nehari_project: no positive bracket");
    int guard = 0;
    while (constraint_gap(u, t_hi, norm2, spec) > 0) {
        t_hi *= 2;
        if (++guard > 200)
            throw std::invalid_argument("nehari_project: constraint never crossed");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (t_lo + t_hi);
        if (constraint_gap(u, mid, norm2, spec) > 0)
            t_lo = mid;
        else
            t_hi = mid;
        if (t_hi - t_lo < 1e-15 * t_hi) break;
    }
    return 0.5 * (t_lo + t_hi);
}

Field symmetrize_even(const Field& u) {
    const Grid& g = u.grid;
    Field out = u;
    int ix[3];
    for (int axis = 0; axis < g.dim; ++axis) {
        Array next(g.size());
        for (std::int64_t i = 0; i < g.size(); ++i) {
            g.unflatten(i, ix);
            int rx[3] = {ix[0], ix[1], ix[2]};
            rx[axis] = (g.n - ix[axis]) % g.n;
            next[i] = 0.5 * (out.values[i] + out.values[g.flatten(rx)]);
        }
        out.values = next;
    }
    return out;
}

Field equation_residual(const Field& u, double s, double lambda,
                        const NonlinearitySpec& spec) {
    Field res = frac_laplacian_apply(u, s);
    res.values += lambda * u.values - spec.f_of(u.values);
    return res;
}

namespace {

GroundStateRecord make_record(const Field& u, double s, double lambda,
                              const NonlinearitySpec& spec) {
    GroundStateRecord rec;
    rec.u = u;
    rec.s = s;
    rec.lambda = lambda;
    rec.kinetic = dirichlet_form(u, u, s);
    rec.mass = u.grid.cell_volume() * u.values.square().sum();
    rec.potential = u.grid.cell_volume() * spec.F_of(u.values).sum();
    rec.action = 0.5 * (rec.kinetic + lambda * rec.mass) - rec.potential;
    rec.max_value = u.values.maxCoeff();
    rec.min_value = u.values.minCoeff();
    Field res = equation_residual(u, s, lambda, spec);
    rec.residual_norm = res.l2_norm();
    rec.residual_rel = rec.residual_norm / (lambda * u.l2_norm());
    return rec;
}

Field initial_bump(const Grid& g, double s, double lambda,
                   const SolverOptions& opts) {
    // algebraic bump with the expected tail class (1 + |x/w|^2)^{-(N+2s)/2};
    // width ~ the lambda length scale, capped well inside the box
    double w = opts.init_width;
    if (w <= 0) w = std::min(std::pow(lambda, -0.5 / s), 0.1 * g.half_width);
    const double p = 0.5 * (g.dim + 2.0 * s);
    Field u(g);
    int ix[3];
    for (std::int64_t i = 0; i < g.size(); ++i) {
        g.unflatten(i, ix);
        double r2 = 0;
        for (int d = 0; d < g.dim; ++d) {
            const double x = g.coord(ix[d]);
            r2 += x * x;
        }
        u.values[i] = std::pow(1.0 + r2 / (w * w), -p);
    }
    if (opts.init_amplitude > 0) u.values *= opts.init_amplitude;
    return u;
}

} // namespace

GroundStateRecord solve_ground_state(const Grid& grid, double s, double lambda,
                                     const NonlinearitySpec& spec,
                                     const SolverOptions& opts,
                                     const Field* initial) {
    if (!(s > 0 && s < 1)) throw std::invalid_argument("solve_ground_state: s in (0,1)");
    if (!(lambda > 0)) throw std::invalid_argument("solve_ground_state: lambda > 0");

    Field u = initial ? *initial : initial_bump(grid, s, lambda, opts);
    if (!(u.grid == grid)) throw std::invalid_argument("solve_ground_state: initial grid mismatch");
    u = symmetrize_even(u);
    u.values = u.values.max(0.0);
    u.values *= nehari_project(u, s, lambda, spec);

    // stage 1: constrained fixed point  u <- t* (D + lambda)^{-1} f(u)
    int picard_done = 0;
    for (int it = 0; it < opts.picard_max; ++it) {
        Field fu(grid, spec.f_of(u.values));
        Field w = invert_helmholtz(fu, s, lambda);
        w = symmetrize_even(w);
        w.values = w.values.max(0.0);
        double t;
        try {
            t = nehari_project(w, s, lambda, spec);
        } catch (const std::invalid_argument&) {
            throw SolverError("fixed-point iterate left the admissible set",
                              make_record(u, s, lambda, spec));
        }
        w.values *= t;
        const double change = rel_l2_distance(u, w);
        u = w;
        picard_done = it + 1;
        if (change < opts.picard_tol) break;
    }

    // stage 2: Newton-Krylov polish on the even subspace
    const double unorm_scale = lambda * u.l2_norm();
    Field res = equation_residual(u, s, lambda, spec);
    double rnorm = res.l2_norm();
    int newton_done = 0;
    auto precond = [&](const Array& v) {
        Field tmp(grid, v);
        return invert_helmholtz(tmp, s, lambda).values;
    };
    for (int it = 0; it < opts.newton_max; ++it) {
        if (rnorm <= opts.newton_tol * unorm_scale) break;
        Array fp = spec.fprime_of(u.values);
        auto jac = [&](const Array& v) {
            Field tmp(grid, v);
            Field out = frac_laplacian_apply(tmp, s);
            out.values += lambda * v - fp * v;
            return out.values;
        };
        Array dv = Array::Zero(grid.size());
        const double forcing =
            std::max(1e-4, std::min(1e-2, std::sqrt(rnorm / unorm_scale)));
        minres(jac, res.values, dv, precond, forcing, opts.minres_max);

        // backtracking on the residual norm
        double step = 1.0;
        Field trial = u;
        double trial_norm = rnorm;
        bool accepted = false;
        for (int ls = 0; ls < 12; ++ls) {
            trial.values = u.values - step * dv;
            trial = symmetrize_even(trial);
            Field tr = equation_residual(trial, s, lambda, spec);
            trial_norm = tr.l2_norm();
            if (trial_norm < (1.0 - 1e-4 * step) * rnorm) {
                accepted = true;
                res = tr;
                break;
            }
            step *= 0.5;
        }
        if (!accepted)
            throw SolverError("line search stalled",
                              make_record(u, s, lambda, spec));
        u = trial;
        rnorm = trial_norm;
        newton_done = it + 1;
    }

    GroundStateRecord rec = make_record(u, s, lambda, spec);
    rec.picard_iterations = picard_done;
    rec.newton_iterations = newton_done;
    rec.converged = rec.residual_norm <= opts.newton_tol * lambda * u.l2_norm() * 10;
    if (!rec.converged)
        throw SolverError("solver did not reach the requested residual", rec);
    if (rec.min_value < -opts.positivity_tol * rec.max_value)
        throw SolverError("converged iterate is not positive", rec);
    return rec;
}

namespace {

// Cosine-basis workspace on the quarter lattice x_j = j h, j = 0..M per
// axis (M = n/2). REDFT00 diagonalizes every even-symmetric Fourier
// multiplier with wavenumbers k_j = pi j / L.
struct QuarterSpace {
    Grid full;
    int M = 0;            // quarter lattice has M + 1 points per axis
    std::int64_t qsize = 0;
    Array weights;        // torus multiplicity of each quarter point
    Array sqrtw;
    double* buf = nullptr;
    fftw_plan plan = nullptr; // self-inverse up to the factor (2M)^dim

    explicit QuarterSpace(const Grid& g) : full(g), M(g.n / 2) {
        const int np = M + 1;
        qsize = 1;
        for (int d = 0; d < g.dim; ++d) qsize *= np;
        weights.resize(qsize);
        int jx[3];
        for (std::int64_t i = 0; i < qsize; ++i) {
            unflatten(i, jx);
            double w = 1.0;
            for (int d = 0; d < g.dim; ++d)
                if (jx[d] != 0 && jx[d] != M) w *= 2.0;
            weights[i] = w;
        }
        sqrtw = weights.sqrt();
        buf = fftw_alloc_real(static_cast<size_t>(qsize));
        int dims[3] = {np, np, np};
        fftw_r2r_kind kinds[3] = {FFTW_REDFT00, FFTW_REDFT00, FFTW_REDFT00};
        plan = fftw_plan_r2r(g.dim, dims, buf, buf, kinds, FFTW_ESTIMATE);
    }
    ~QuarterSpace() {
        fftw_destroy_plan(plan);
        fftw_free(buf);
    }
    QuarterSpace(const QuarterSpace&) = delete;
    QuarterSpace& operator=(const QuarterSpace&) = delete;

    void unflatten(std::int64_t i, int* jx) const {
        const int np = M + 1;
        for (int d = full.dim - 1; d >= 0; --d) {
            jx[d] = static_cast<int>(i % np);
            i /= np;
        }
    }

    Array fold(const Field& u) const {
        Array q(qsize);
        int jx[3];
        for (std::int64_t i = 0; i < qsize; ++i) {
            unflatten(i, jx);
            int ix[3] = {0, 0, 0};
            // quarter index j corresponds to x = j h, i.e. full index
            // n/2 + j, with j = M wrapping to the x = -L plane
            for (int d = 0; d < full.dim; ++d)
                ix[d] = (full.n / 2 + jx[d]) % full.n;
            q[i] = u.values[full.flatten(ix)];
        }
        return q;
    }

    Field unfold(const Array& q) const {
        Field u(full);
        int ix[3];
        for (std::int64_t i = 0; i < full.size(); ++i) {
            full.unflatten(i, ix);
            std::int64_t flat = 0;
            for (int d = 0; d < full.dim; ++d) {
                const int off = std::abs(ix[d] - full.n / 2);
                const int j = std::min(off, full.n - off); // reflect, j <= M
                flat = flat * (M + 1) + j;
            }
            u.values[i] = q[flat];
        }
        return u;
    }

    double integral(const Array& q) const {
        return full.cell_volume() * (weights * q).sum();
    }
    double dotw(const Array& a, const Array& b) const {
        return (weights * a * b).sum();
    }

    template <typename MultOfK2>
    Array apply_mult(const Array& q, MultOfK2&& m_of_k2) const {
        std::copy(q.data(), q.data() + qsize, buf);
        fftw_execute(plan);
        Array k2ax(M + 1);
        const double k0 = M_PI / full.half_width;
        for (int j = 0; j <= M; ++j) k2ax[j] = (k0 * j) * (k0 * j);
        double norm = 1.0;
        for (int d = 0; d < full.dim; ++d) norm *= 2.0 * M;
        const double inv = 1.0 / norm;
        const int np = M + 1;
        const int n0 = (full.dim >= 3) ? np : 1;
        const int n1 = (full.dim >= 2) ? np : 1;
        std::int64_t idx = 0;
        for (int i0 = 0; i0 < n0; ++i0) {
            const double k2_0 = (full.dim >= 3) ? k2ax[i0] : 0.0;
            for (int i1 = 0; i1 < n1; ++i1) {
                const double k2_01 = k2_0 + ((full.dim >= 2) ? k2ax[i1] : 0.0);
                for (int i2 = 0; i2 < np; ++i2, ++idx)
                    buf[idx] *= m_of_k2(k2_01 + k2ax[i2]) * inv;
            }
        }
        fftw_execute(plan);
        Array out(qsize);
        std::copy(buf, buf + qsize, out.data());
        return out;
    }
};

} // namespace

GroundStateRecord newton_polish_even(const Field& initial, double s,
                                     double lambda,
                                     const NonlinearitySpec& spec,
                                     const SolverOptions& opts) {
    if (!(s > 0 && s < 1)) throw std::invalid_argument("newton_polish_even: s in (0,1)");
    if (!(lambda > 0)) throw std::invalid_argument("newton_polish_even: lambda > 0");
    QuarterSpace qs(initial.grid);
    Array u = qs.fold(symmetrize_even(initial));

    auto residual = [&](const Array& v) {
        Array g = qs.apply_mult(v, [s](double k2) {
            return k2 > 0 ? std::pow(k2, s) : 0.0;
        });
        g += lambda * v - spec.f_of(v);
        return g;
    };
    auto wnorm = [&](const Array& v) { return std::sqrt(qs.dotw(v, v)); };

    Array res = residual(u);
    double rnorm = wnorm(res);
    const double unorm_scale = lambda * wnorm(u);
    int newton_done = 0;
    // conjugated system: tilde A = W^{1/2} L_+ W^{-1/2} is symmetric in the
    // plain dot product used by MINRES
    auto precond = [&](const Array& v) {
        Array t = v / qs.sqrtw;
        t = qs.apply_mult(t, [s, lambda](double k2) {
            return 1.0 / ((k2 > 0 ? std::pow(k2, s) : 0.0) + lambda);
        });
        return Array(qs.sqrtw * t);
    };
    for (int it = 0; it < opts.newton_max; ++it) {
        if (rnorm <= opts.newton_tol * unorm_scale) break;
        Array fp = spec.fprime_of(u);
        auto jac = [&](const Array& v) {
            Array t = v / qs.sqrtw;
            Array out = qs.apply_mult(t, [s](double k2) {
                return k2 > 0 ? std::pow(k2, s) : 0.0;
            });
            out += lambda * t - fp * t;
            return Array(qs.sqrtw * out);
        };
        Array rhs = qs.sqrtw * res;
        Array dv = Array::Zero(qs.qsize);
        const double forcing =
            std::max(1e-4, std::min(1e-2, std::sqrt(rnorm / unorm_scale)));
        minres(jac, rhs, dv, precond, forcing, opts.minres_max);
        dv /= qs.sqrtw;

        double step = 1.0;
        Array trial;
        double trial_norm = rnorm;
        bool accepted = false;
        for (int ls = 0; ls < 12; ++ls) {
            trial = u - step * dv;
            Array tr = residual(trial);
            trial_norm = wnorm(tr);
            if (trial_norm < (1.0 - 1e-4 * step) * rnorm) {
                accepted = true;
                res = tr;
                break;
            }
            step *= 0.5;
        }
        if (!accepted)
            throw SolverError("line search stalled",
                              make_record(qs.unfold(u), s, lambda, spec));
        u = trial;
        rnorm = trial_norm;
        newton_done = it + 1;
    }

    GroundStateRecord rec = make_record(qs.unfold(u), s, lambda, spec);
    rec.newton_iterations = newton_done;
    rec.converged = rec.residual_norm <= opts.newton_tol * lambda *
                                             rec.u.l2_norm() * 10;
    if (!rec.converged)
        throw SolverError("solver did not reach the requested residual", rec);
    if (rec.min_value < -opts.positivity_tol * rec.max_value)
        throw SolverError("converged iterate is not positive", rec);
    return rec;
}

double pohozaev_residual(const GroundStateRecord& rec,
                         const NonlinearitySpec& spec) {
    (void)spec;
    const int N = rec.u.grid.dim;
    const double t1 = (N - 2.0 * rec.s) * rec.kinetic;
    const double t2 = N * rec.lambda * rec.mass;
    const double t3 = 2.0 * N * rec.potential;
    if (t2 == 0) return 0.0;
    return (t1 + t2 - t3) / t2;
}

DecayFit decay_fit(const Field& u, double w_lo, double w_hi, int n_samples) {
    if (!(0 < w_lo && w_lo < w_hi && w_hi < 0.5))
        throw std::invalid_argument("decay_fit: need 0 < w_lo < w_hi < 0.5");
    const double L = u.grid.half_width;
    Array radii(n_samples);
    for (int i = 0; i < n_samples; ++i)
        radii[i] = (w_lo + (w_hi - w_lo) * i / (n_samples - 1.0)) * L;
    Array vals = axis_profile(u, radii);
    DecayFit fit;
    // least squares on log u = log A - p log r
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int used = 0;
    for (int i = 0; i < n_samples; ++i) {
        if (vals[i] <= 0) continue;
        const double x = std::log(radii[i]);
        const double y = std::log(vals[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++used;
    }
    if (used < 8) throw std::invalid_argument("decay_fit: profile not positive in window");
    const double det = used * sxx - sx * sx;
    const double slope = (used * sxy - sx * sy) / det;
    const double icpt = (sy - slope * sx) / used;
    fit.rate = -slope;
    fit.amplitude = std::exp(icpt);
    double ss = 0;
    for (int i = 0; i < n_samples; ++i) {
        if (vals[i] <= 0) continue;
        const double pred = icpt + slope * std::log(radii[i]);
        ss += (std::log(vals[i]) - pred) * (std::log(vals[i]) - pred);
    }
    fit.rms_misfit = std::sqrt(ss / used);
    return fit;
}

RadializeResult recenter_and_radialize(const Field& u) {
    const Grid& g = u.grid;
    RadializeResult out;

    // integer roll so the discrete maximum sits at coordinate 0
    Eigen::Index imax = 0;
    u.values.maxCoeff(&imax);
    int ix[3];
    g.unflatten(imax, ix);
    Field rolled(g);
    int jx[3];
    const int off[3] = {ix[0] - g.n / 2, g.dim > 1 ? ix[1] - g.n / 2 : 0,
                        g.dim > 2 ? ix[2] - g.n / 2 : 0};
    for (std::int64_t i = 0; i < g.size(); ++i) {
        g.unflatten(i, jx);
        int sxp[3];
        for (int d = 0; d < g.dim; ++d) sxp[d] = ((jx[d] + off[d]) % g.n + g.n) % g.n;
        rolled.values[i] = u.values[g.flatten(sxp)];
    }
    out.center.assign(static_cast<size_t>(g.dim), 0.0);
    for (int d = 0; d < g.dim; ++d) out.center[static_cast<size_t>(d)] = g.coord(ix[d]);

    // sub-cell refinement: quadratic fit through the three on-axis neighbors
    std::vector<double> shift(static_cast<size_t>(g.dim), 0.0);
    bool need_shift = false;
    int cx[3] = {g.n / 2, g.n / 2, g.n / 2};
    for (int d = 0; d < g.dim; ++d) {
        int lo[3] = {cx[0], cx[1], cx[2]};
        int hi[3] = {cx[0], cx[1], cx[2]};
        lo[d] -= 1;
        hi[d] += 1;
        const double vm = rolled.values[g.flatten(lo)];
        const double v0 = rolled.values[g.flatten(cx)];
        const double vp = rolled.values[g.flatten(hi)];
        const double denom = vm - 2 * v0 + vp;
        if (denom < 0) {
            const double frac = 0.5 * (vm - vp) / denom;
            shift[static_cast<size_t>(d)] = frac * g.spacing();
            if (std::abs(frac) > 1e-9) need_shift = true;
        }
    }
    if (need_shift) {
        std::vector<double> t(shift.size());
        for (size_t d = 0; d < t.size(); ++d) t[d] = -shift[d];
        rolled = spectral_shift(rolled, t);
        for (int d = 0; d < g.dim; ++d)
            out.center[static_cast<size_t>(d)] += shift[static_cast<size_t>(d)];
    }

    // average over lattice orbits of equal squared distance to the origin
    std::map<std::int64_t, std::pair<double, std::int64_t>> orbits;
    for (std::int64_t i = 0; i < g.size(); ++i) {
        g.unflatten(i, jx);
        std::int64_t r2 = 0;
        for (int d = 0; d < g.dim; ++d) {
            const std::int64_t o = jx[d] - g.n / 2;
            r2 += o * o;
        }
        auto& slot = orbits[r2];
        slot.first += rolled.values[i];
        slot.second += 1;
    }
    Field avg(g);
    double diff2 = 0;
    for (std::int64_t i = 0; i < g.size(); ++i) {
        g.unflatten(i, jx);
        std::int64_t r2 = 0;
        for (int d = 0; d < g.dim; ++d) {
            const std::int64_t o = jx[d] - g.n / 2;
            r2 += o * o;
        }
        const auto& slot = orbits[r2];
        avg.values[i] = slot.first / static_cast<double>(slot.second);
        diff2 += (avg.values[i] - rolled.values[i]) * (avg.values[i] - rolled.values[i]);
    }
    out.asymmetry = std::sqrt(diff2) / rolled.values.matrix().norm();
    out.u = avg;
    return out;
}

} // namespace fgs
