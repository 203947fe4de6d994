#ifndef FGS_RADIAL_HPP
#define FGS_RADIAL_HPP

#include "fgs/grid.hpp"

namespace fgs {

/// Cell-centered radial mesh r_j = (j + 1/2) R / m on (0, R).
struct RadialGrid {
    int dim = 1;
    double radius = 0;
    int m = 0;

    double spacing() const { return radius / m; }
    double r(int j) const { return (j + 0.5) * spacing(); }
    /// Quadrature weight for int_0^R g r^{N-1} dr.
    double weight(int j) const { return std::pow(r(j), dim - 1) * spacing(); }
};

RadialGrid make_radial_grid(int N, double R, int m);

/// Fractional power of the radial Laplacian restricted to the spherical-
/// harmonic sector l, built by spectral calculus on a finite-difference
/// discretization of  -d2/dr2 - (N-1)/r d/dr + l(l+N-2)/r2  with a Dirichlet
/// wall at r = R. `matrix` is the symmetrized form W^{1/2} A W^{-1/2};
/// sector one adds a multiplicative potential on top of it.
struct SectorOperator {
    RadialGrid mesh;
    int ell = 0;
    double s = 0;
    Eigen::MatrixXd matrix;            // symmetric, m x m: (-Delta_l)^s
    Eigen::VectorXd sqrt_weights;      // W^{1/2} diagonal

    /// Eigenvalues (ascending) and W^{-1/2}-mapped eigenvectors of
    /// matrix + diag(potential); potential given on mesh points.
    void spectrum(const Eigen::VectorXd& potential, Eigen::VectorXd& evals,
                  Eigen::MatrixXd& evecs) const;
};

SectorOperator build_sector_operator(const RadialGrid& mesh, int ell, double s);

} // namespace fgs

#endif
