#ifndef FGS_EIGENSOLVERS_HPP
#define FGS_EIGENSOLVERS_HPP

#include "fgs/grid.hpp"
#include <functional>
#include <vector>

namespace fgs {

using LinearOp = std::function<Array(const Array&)>;

struct IterativeResult {
    bool converged = false;
    int iterations = 0;
    double residual = 0;
};

/// Preconditioned conjugate gradients for SPD operators.
IterativeResult pcg(const LinearOp& A, const Array& b, Array& x,
                    const LinearOp& precond, double tol, int max_iter);

/// Preconditioned MINRES for symmetric (possibly indefinite) operators;
/// the preconditioner must be SPD.
IterativeResult minres(const LinearOp& A, const Array& b, Array& x,
                       const LinearOp& precond, double tol, int max_iter);

/// Crude extreme-eigenvalue estimates from a plain Lanczos sweep.
std::pair<double, double> lanczos_extent(const LinearOp& A, Eigen::Index dim,
                                         int steps, std::uint64_t seed);

struct EigenPairs {
    Eigen::VectorXd values;             // ascending
    std::vector<Array> vectors;         // unit Euclidean norm
    std::vector<double> residual_norms; // |A v - lambda v|
};

/// Lowest `nev` eigenpairs of a symmetric operator by shift-invert Lanczos
/// with full reorthogonalization. `solve_shifted` applies (A - shift)^{-1};
/// eigenvalues are recovered by Rayleigh quotients of the Ritz vectors.
EigenPairs shift_invert_lanczos(const LinearOp& A, const LinearOp& solve_shifted,
                                double shift, Eigen::Index dim, int nev,
                                int max_basis, double tol, std::uint64_t seed,
                                const LinearOp& project = nullptr);

} // namespace fgs

#endif
