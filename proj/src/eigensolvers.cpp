#include "fgs/eigensolvers.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace fgs {

IterativeResult pcg(const LinearOp& A, const Array& b, Array& x,
                    const LinearOp& precond, double tol, int max_iter) {
    IterativeResult res;
    if (x.size() != b.size()) x = Array::Zero(b.size());
    const double bnorm = std::sqrt(b.square().sum());
    if (bnorm == 0) {
        x.setZero();
        res.converged = true;
        return res;
    }
    Array r = b - A(x);
    Array z = precond ? precond(r) : r;
    Array p = z;
    double rz = (r * z).sum();
    for (int it = 0; it < max_iter; ++it) {
        res.residual = std::sqrt(r.square().sum()) / bnorm;
        if (res.residual < tol) {
            res.converged = true;
            res.iterations = it;
            return res;
        }
        Array Ap = A(p);
        const double alpha = rz / (p * Ap).sum();
        x += alpha * p;
        r -= alpha * Ap;
        z = precond ? precond(r) : r;
        const double rz_new = (r * z).sum();
        p = z + (rz_new / rz) * p;
        rz = rz_new;
        res.iterations = it + 1;
    }
    res.residual = std::sqrt(r.square().sum()) / bnorm;
    res.converged = res.residual < tol;
    return res;
}

IterativeResult minres(const LinearOp& A, const Array& b, Array& x,
                       const LinearOp& precond, double tol, int max_iter) {
    // standard preconditioned MINRES recurrence (Paige & Saunders)
    IterativeResult res;
    if (x.size() != b.size()) x = Array::Zero(b.size());
    Array r1 = b - A(x);
    Array y = precond ? precond(r1) : r1;
    double beta1 = (r1 * y).sum();
    if (beta1 < 0) throw std::invalid_argument("minres: preconditioner not SPD");
    if (beta1 == 0) {
        res.converged = true;
        return res;
    }
    beta1 = std::sqrt(beta1);
    const double bnorm = std::sqrt((precond ? (b * precond(b)).sum()
                                            : b.square().sum()));
    double eta = beta1, beta = beta1;
    double c_old = -1, c = -1, s_old = 0, s = 0; // cs starts at -1 in this recurrence
    double delta1 = 0, eps = 0;
    Array r2 = r1;
    Array w = Array::Zero(b.size()), w_old = Array::Zero(b.size());
    Array v_old = Array::Zero(b.size());
    for (int it = 0; it < max_iter; ++it) {
        Array v = y / beta;
        y = A(v);
        if (it > 0) y -= (beta / beta1) * r1;
        const double alpha = (v * y).sum();
        y -= (alpha / beta) * r2;
        r1 = r2;
        r2 = y;
        y = precond ? precond(r2) : r2;
        beta1 = beta;
        const double beta_sq = (r2 * y).sum();
        if (beta_sq < 0) throw std::invalid_argument("minres: preconditioner not SPD");
        const double beta_new = std::sqrt(beta_sq);

        const double delta2 = c * delta1 + s * alpha;
        const double gamma1 = s * delta1 - c * alpha;
        const double eps_new = s * beta_new;
        const double delta1_new = -c * beta_new;
        const double gamma2 = std::hypot(gamma1, beta_new);
        if (gamma2 == 0) break;
        c_old = c;
        s_old = s;
        c = gamma1 / gamma2;
        s = beta_new / gamma2;

        Array w_new = (v - eps * w_old - delta2 * w) / gamma2;
        x += (c * eta) * w_new;
        w_old = w;
        w = w_new;
        eta = s * eta;
        beta = beta_new;
        delta1 = delta1_new;
        eps = eps_new;
        (void)c_old;
        (void)s_old;

        res.iterations = it + 1;
        res.residual = std::abs(eta) / bnorm;
        if (res.residual < tol) {
            res.converged = true;
            return res;
        }
    }
    res.converged = res.residual < tol;
    return res;
}

std::pair<double, double> lanczos_extent(const LinearOp& A, Eigen::Index dim,
                                         int steps, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    Array v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = gauss(rng);
    v /= std::sqrt(v.square().sum());
    Array v_old = Array::Zero(dim);
    double beta = 0;
    std::vector<double> alphas, betas;
    for (int it = 0; it < steps; ++it) {
        Array w = A(v) - beta * v_old;
        const double alpha = (w * v).sum();
        w -= alpha * v;
        alphas.push_back(alpha);
        beta = std::sqrt(w.square().sum());
        if (beta < 1e-14) break;
        betas.push_back(beta);
        v_old = v;
        v = w / beta;
    }
    const int k = static_cast<int>(alphas.size());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
        T(i, i) = alphas[static_cast<size_t>(i)];
        if (i + 1 < k) T(i, i + 1) = T(i + 1, i) = betas[static_cast<size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    return {es.eigenvalues()(0), es.eigenvalues()(k - 1)};
}

EigenPairs shift_invert_lanczos(const LinearOp& A, const LinearOp& solve_shifted,
                                double shift, Eigen::Index dim, int nev,
                                int max_basis, double tol, std::uint64_t seed,
                                const LinearOp& project) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    Array v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = gauss(rng);
    if (project) v = project(v);
    v /= std::sqrt(v.square().sum());

    std::vector<Array> basis;
    std::vector<double> alphas, betas;
    EigenPairs out;
    Array w;
    for (int it = 0; it < max_basis; ++it) {
        basis.push_back(v);
        w = solve_shifted(v);
        if (project) w = project(w);
        if (it > 0) w -= betas.back() * basis[static_cast<size_t>(it - 1)];
        const double alpha = (w * v).sum();
        w -= alpha * v;
        // full reorthogonalization, twice
        for (int pass = 0; pass < 2; ++pass)
            for (const Array& b : basis) w -= (w * b).sum() * b;
        alphas.push_back(alpha);
        const double beta = std::sqrt(w.square().sum());

        const int k = it + 1;
        bool check = (beta < 1e-13) || (k >= nev + 2 && k % 4 == 0) ||
                     (it + 1 == max_basis);
        if (check && k >= nev) {
            Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
            for (int i = 0; i < k; ++i) {
                T(i, i) = alphas[static_cast<size_t>(i)];
                if (i + 1 < k)
                    T(i, i + 1) = T(i + 1, i) = betas[static_cast<size_t>(i)];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
            // largest in shift-inverted space <-> closest above the shift
            out.values.resize(nev);
            out.vectors.clear();
            out.residual_norms.clear();
            double worst = 0;
            for (int e = 0; e < nev; ++e) {
                const int col = k - 1 - e;
                Array ritz = Array::Zero(dim);
                for (int i = 0; i < k; ++i)
                    ritz += es.eigenvectors()(i, col) * basis[static_cast<size_t>(i)];
                ritz /= std::sqrt(ritz.square().sum());
                Array Ar = A(ritz);
                const double lam = (ritz * Ar).sum();
                const double rn = std::sqrt((Ar - lam * ritz).square().sum());
                out.values[e] = lam;
                out.vectors.push_back(ritz);
                out.residual_norms.push_back(rn);
                worst = std::max(worst, rn / std::max(std::abs(lam), 1.0));
            }
            if (worst < tol || beta < 1e-13 || it + 1 == max_basis) {
                // sort ascending by eigenvalue
                std::vector<int> ord(static_cast<size_t>(nev));
                for (int e = 0; e < nev; ++e) ord[static_cast<size_t>(e)] = e;
                std::sort(ord.begin(), ord.end(), [&](int a, int b) {
                    return out.values[a] < out.values[b];
                });
                EigenPairs sorted;
                sorted.values.resize(nev);
                for (int e = 0; e < nev; ++e) {
                    sorted.values[e] = out.values[ord[static_cast<size_t>(e)]];
                    sorted.vectors.push_back(out.vectors[static_cast<size_t>(ord[static_cast<size_t>(e)])]);
                    sorted.residual_norms.push_back(
                        out.residual_norms[static_cast<size_t>(ord[static_cast<size_t>(e)])]);
                }
                return sorted;
            }
        }
        if (beta < 1e-13) break;
        betas.push_back(beta);
        v = w / beta;
    }
    return out;
}

} // namespace fgs
