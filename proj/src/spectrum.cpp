#include "fgs/spectrum.hpp"

#include <cmath>

namespace fgs {

LinearOp make_lplus(const GroundStateRecord& rec, const NonlinearitySpec& spec) {
    const Grid grid = rec.u.grid;
    const double s = rec.s, lambda = rec.lambda;
    Array fp = spec.fprime_of(rec.u.values);
    return [grid, s, lambda, fp](const Array& v) {
        Field tmp(grid, v);
        Field out = frac_laplacian_apply(tmp, s);
        out.values += lambda * v - fp * v;
        return out.values;
    };
}

LinearOp make_lminus(const GroundStateRecord& rec, const NonlinearitySpec& spec) {
    const Grid grid = rec.u.grid;
    const double s = rec.s, lambda = rec.lambda;
    // f(u)/u with the limit f'(0) = 0 at vanishing u
    Array quot(rec.u.values.size());
    for (Eigen::Index i = 0; i < quot.size(); ++i) {
        const double ui = rec.u.values[i];
        quot[i] = std::abs(ui) > 1e-300 ? spec.f_signed(ui) / ui : 0.0;
    }
    return [grid, s, lambda, quot](const Array& v) {
        Field tmp(grid, v);
        Field out = frac_laplacian_apply(tmp, s);
        out.values += lambda * v - quot * v;
        return out.values;
    };
}

EigenPairs lowest_spectrum(const LinearOp& op, const GroundStateRecord& rec,
                           const SpectrumOptions& opts, const LinearOp& project) {
    const Grid& grid = rec.u.grid;
    auto [est_min, est_max] = lanczos_extent(op, grid.size(), 60, opts.seed ^ 0x9e3779b9);
    const double shift = est_min - 0.05 * std::max(est_max - est_min, 1.0);
    const double s = rec.s;
    const double lam_shift = rec.lambda - shift;
    auto precond = [&grid, s, lam_shift](const Array& v) {
        Field tmp(grid, v);
        return apply_multiplier(tmp, [s, lam_shift](double k2) {
                   const double m = (k2 > 0 ? std::pow(k2, s) : 0.0) + lam_shift;
                   return 1.0 / std::max(m, 1e-12);
               }).values;
    };
    auto shifted = [&op, shift](const Array& v) -> Array {
        return op(v) - shift * v;
    };
    auto solve = [&](const Array& b) {
        Array x = Array::Zero(b.size());
        pcg(shifted, b, x, precond, opts.pcg_tol, opts.pcg_max);
        return x;
    };
    EigenPairs pairs =
        shift_invert_lanczos(op, solve, shift, grid.size(), opts.nev,
                             opts.max_basis, opts.tol, opts.seed, project);
    // the shift-invert transform loses absolute accuracy for eigenvalues
    // near zero; the Rayleigh quotient of the Ritz vector restores it
    for (int e = 0; e < pairs.values.size(); ++e) {
        const Array& v = pairs.vectors[static_cast<size_t>(e)];
        pairs.values[e] = (v * op(v)).sum() / v.square().sum();
    }
    return pairs;
}

MorseReport morse_index_report(const GroundStateRecord& rec,
                               const NonlinearitySpec& spec,
                               const SpectrumOptions& opts) {
    const Grid& grid = rec.u.grid;
    SpectrumOptions o = opts;
    o.nev = std::max(opts.nev, grid.dim + 3);
    LinearOp lplus = make_lplus(rec, spec);
    EigenPairs pairs = lowest_spectrum(lplus, rec, o);

    auto [emin, emax] = lanczos_extent(lplus, grid.size(), 40, o.seed ^ 0x5bd1);
    (void)emin;
    MorseReport rep;
    rep.eigenvalues = pairs.values;
    rep.tol_zero = std::max(1e-7, 50.0 * std::numeric_limits<double>::epsilon() *
                                      std::abs(emax));

    // orthonormal basis of the translation modes
    std::vector<Array> basis;
    for (int d = 0; d < grid.dim; ++d) {
        Array g = spectral_derivative(rec.u, d).values;
        for (const Array& b : basis) g -= (g * b).sum() * b;
        const double nrm = std::sqrt(g.square().sum());
        if (nrm > 1e-14) basis.push_back(g / nrm);
    }

    int kernel = 0, negatives = 0;
    double mu2 = 0;
    bool mu2_set = false;
    for (int e = 0; e < o.nev; ++e) {
        const double mu = pairs.values[e];
        if (mu < -rep.tol_zero) {
            ++negatives;
            continue;
        }
        if (std::abs(mu) <= rep.tol_zero) {
            double proj2 = 0;
            for (const Array& b : basis) {
                const double c = (pairs.vectors[static_cast<size_t>(e)] * b).sum();
                proj2 += c * c;
            }
            const double cosine = std::sqrt(proj2);
            rep.kernel_cosines.push_back(cosine);
            if (cosine > 0.999) {
                ++kernel;
                continue;
            }
        }
        if (!mu2_set) {
            mu2 = mu;
            mu2_set = true;
        }
    }
    rep.morse_index = negatives;
    rep.kernel_dim = kernel;
    rep.mu1 = pairs.values[0];
    rep.mu2 = mu2;
    rep.kernel_is_translations = (kernel == grid.dim) &&
        static_cast<int>(rep.kernel_cosines.size()) == kernel;
    return rep;
}

int harmonic_multiplicity(int N, int ell) {
    if (ell == 0) return 1;
    if (N == 1) return ell == 1 ? 1 : 0;
    if (N == 2) return 2;
    return 2 * ell + 1;
}

namespace {

Eigen::VectorXd sector_potential(const GroundStateRecord& rec,
                                 const NonlinearitySpec& spec,
                                 const RadialGrid& mesh) {
    Array radii(mesh.m);
    for (int j = 0; j < mesh.m; ++j) radii[j] = mesh.r(j);
    Array prof = axis_profile(rec.u, radii);
    Eigen::VectorXd pot(mesh.m);
    for (int j = 0; j < mesh.m; ++j)
        pot[j] = rec.lambda - spec.fprime_signed(prof[j]);
    return pot;
}

} // namespace

SectorSpectrum sector_spectrum(const GroundStateRecord& rec,
                               const NonlinearitySpec& spec, int ell, int m,
                               int count, double radius) {
    const Grid& grid = rec.u.grid;
    if (radius <= 0) radius = grid.half_width;
    RadialGrid mesh = make_radial_grid(grid.dim, radius, m);
    SectorOperator op = build_sector_operator(mesh, ell, rec.s);
    Eigen::VectorXd evals;
    Eigen::MatrixXd evecs;
    op.spectrum(sector_potential(rec, spec, mesh), evals, evecs);
    SectorSpectrum out;
    out.ell = ell;
    out.mesh = mesh;
    count = std::min(count, m);
    out.eigenvalues = evals.head(count);
    out.eigenvectors = evecs.leftCols(count);
    return out;
}

SectorCrosscheck sector_morse_crosscheck(const GroundStateRecord& rec,
                                         const NonlinearitySpec& spec, int m,
                                         int lmax, double radius) {
    SectorCrosscheck out;
    const int N = rec.u.grid.dim;
    if (N == 1) lmax = std::min(lmax, 1);
    double best_zero = std::numeric_limits<double>::infinity();
    double prev_lowest = -std::numeric_limits<double>::infinity();
    for (int ell = 0; ell <= lmax; ++ell) {
        SectorSpectrum sp = sector_spectrum(rec, spec, ell, m, 4, radius);
        const double low = sp.eigenvalues[0];
        // count strict negatives with a discretization-aware margin: the
        // translation zero mode lands at -O(h^2) on the radial mesh
        const double h = sp.mesh.spacing();
        const double margin =
            std::max(1e-4, 2.0 * h * h) * std::max(1.0, rec.lambda);
        for (int e = 0; e < sp.eigenvalues.size(); ++e)
            if (sp.eigenvalues[e] < -margin)
                out.morse_sum += harmonic_multiplicity(N, ell);
        if (ell >= 1 && std::abs(low) < std::abs(best_zero)) {
            best_zero = low;
            out.kernel_sector = ell;
        }
        if (ell >= 1) {
            if (low <= prev_lowest) out.ordered = false;
            prev_lowest = low;
        }
        out.sectors.push_back(std::move(sp));
    }
    out.kernel_value = best_zero;
    return out;
}

double bilinear_form(const GroundStateRecord& rec, const NonlinearitySpec& spec,
                     const Field& v, const Field& w) {
    require_same_grid(v, w);
    require_same_grid(v, rec.u);
    const double form = dirichlet_form(v, w, rec.s);
    const Array fp = spec.fprime_of(rec.u.values);
    const double pot = v.grid.cell_volume() *
                       ((rec.lambda - fp) * v.values * w.values).sum();
    return form + pot;
}

int oscillation_count(const Eigen::VectorXd& values, double floor_rel) {
    const double floor = floor_rel * values.cwiseAbs().maxCoeff();
    int count = 0, last_sign = 0;
    for (int i = 0; i < values.size(); ++i) {
        if (std::abs(values[i]) <= floor) continue;
        const int sgn = values[i] > 0 ? 1 : -1;
        if (last_sign != 0 && sgn != last_sign) ++count;
        last_sign = sgn;
    }
    return count;
}

LminusReport lminus_check(const GroundStateRecord& rec,
                          const NonlinearitySpec& spec,
                          const SpectrumOptions& opts) {
    LinearOp lminus = make_lminus(rec, spec);
    const Grid grid = rec.u.grid;
    // restrict to the even subspace: the per-axis symmetrization projector
    auto project = [grid](const Array& v) {
        Field tmp(grid, v);
        return symmetrize_even(tmp).values;
    };
    SpectrumOptions o = opts;
    o.nev = std::max(2, opts.nev > 2 ? 3 : 2);
    EigenPairs pairs = lowest_spectrum(lminus, rec, o, project);
    LminusReport rep;
    rep.lowest = pairs.values[0];
    rep.second = pairs.values[1];
    Array un = rec.u.values / std::sqrt(rec.u.values.square().sum());
    rep.alignment = std::abs((pairs.vectors[0] * un).sum());
    return rep;
}

PiconeReport picone_check_window(const GroundStateRecord& rec,
                                 const NonlinearitySpec& spec,
                                 const Array& phi, const Array& dphi) {
    const Grid& grid = rec.u.grid;
    if (grid.dim != 1)
        throw std::invalid_argument("picone_check: N = 1 only");
    if (phi.size() != grid.size() || dphi.size() != grid.size())
        throw std::invalid_argument("picone_check: window size mismatch");
    const double s = rec.s;

    // v = -u' solves (-Delta)^s v = (f'(u) - lambda) v and is odd, positive
    // on x > 0; w = v * phi keeps w/v smooth by construction.
    Field v = spectral_derivative(rec.u, 0);
    v.values = -v.values;
    Field w = v;
    w.values *= phi;

    PiconeReport rep;
    rep.lhs = bilinear_form(rec, spec, w, w);

    // double integral of H over the quarter plane x > 0, y > 0 with a
    // moment-corrected exclusion window along the diagonal
    const double c = cns_constant(1, s);
    const double h = grid.spacing();
    const int n = grid.n;
    const int m_excl = 1; // exclude |i-j| <= 1
    const double we = (m_excl + 0.5) * h;
    double acc = 0;
    double min_density = 0;
    const int i0 = n / 2 + 1; // first strictly positive coordinate
    for (int i = i0; i < n; ++i) {
        const double x = grid.coord(i);
        const double vx = v.values[i];
        for (int j = i0; j < n; ++j) {
            if (std::abs(i - j) <= m_excl) continue;
            const double y = grid.coord(j);
            const double vy = v.values[j];
            const double dq = phi[i] - phi[j];
            const double kern = std::pow(std::abs(x - y), -1.0 - 2.0 * s) -
                                std::pow(x + y, -1.0 - 2.0 * s);
            const double dens = c * vx * vy * dq * dq * kern;
            min_density = std::min(min_density, dens);
            acc += dens;
        }
        // window re-insertion: near the diagonal H ~ c v(x)^2 phi'(x)^2
        // |x-y|^{1-2s}, integrated over |x-y| < we and divided by h to sit
        // alongside the outer midpoint sum
        const double window = 2.0 * std::pow(we, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
        acc += c * vx * vx * dphi[i] * dphi[i] * window / h;
    }
    rep.rhs = acc * h * h;
    rep.min_density = min_density;
    rep.rel_gap = std::abs(rep.lhs - rep.rhs) /
                  std::max({std::abs(rep.lhs), std::abs(rep.rhs), 1e-300});
    return rep;
}

PiconeReport picone_check(const GroundStateRecord& rec,
                          const NonlinearitySpec& spec, double phi_width) {
    const Grid& grid = rec.u.grid;
    if (phi_width <= 0) phi_width = 0.15 * grid.half_width;
    Array phi(grid.size()), dphi(grid.size());
    for (std::int64_t i = 0; i < grid.size(); ++i) {
        const double x = grid.coord(static_cast<int>(i));
        phi[i] = std::exp(-x * x / (phi_width * phi_width));
        dphi[i] = -2.0 * x / (phi_width * phi_width) * phi[i];
    }
    return picone_check_window(rec, spec, phi, dphi);
}

SecondModeIdentity second_mode_identity(const GroundStateRecord& rec,
                                        const NonlinearitySpec& spec, int m,
                                        double radius) {
    SectorSpectrum sp = sector_spectrum(rec, spec, 0, m, 2, radius);
    SecondModeIdentity out;
    out.mu2 = sp.eigenvalues[1];
    Eigen::VectorXd phi2 = sp.eigenvectors.col(1);
    // orient negative at the origin
    if (phi2[0] > 0) phi2 = -phi2;
    out.value_at_zero = phi2[0];
    out.sign_changes = oscillation_count(phi2);

    const RadialGrid& mesh = sp.mesh;
    Eigen::VectorXd w(mesh.m);
    for (int j = 0; j < mesh.m; ++j) w[j] = std::sqrt(mesh.weight(j));
    Eigen::VectorXd phi2p = phi2.cwiseMax(0.0);

    // weighted quadratic forms through the symmetrized sector matrix
    SectorOperator op = build_sector_operator(mesh, 0, rec.s);
    Array radii(mesh.m);
    for (int j = 0; j < mesh.m; ++j) radii[j] = mesh.r(j);
    Array prof = axis_profile(rec.u, radii);
    Eigen::VectorXd pot(mesh.m);
    for (int j = 0; j < mesh.m; ++j)
        pot[j] = rec.lambda - spec.fprime_signed(prof[j]);

    Eigen::VectorXd y2 = w.asDiagonal() * phi2;
    Eigen::VectorXd yp = w.asDiagonal() * phi2p;
    const double rhs = yp.dot(op.matrix * y2) + yp.dot(pot.asDiagonal() * y2);
    const double lhs = out.mu2 * yp.squaredNorm();
    out.lhs = lhs;
    out.rhs = rhs;
    out.rel_gap = std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
    return out;
}

} // namespace fgs
