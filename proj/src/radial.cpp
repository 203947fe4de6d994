#include "fgs/radial.hpp"

#include <cmath>

namespace fgs {

RadialGrid make_radial_grid(int N, double R, int m) {
    if (N < 1 || N > 3) throw std::invalid_argument("make_radial_grid: N in {1,2,3}");
    if (R <= 0) throw std::invalid_argument("make_radial_grid: R > 0");
    if (m < 8) throw std::invalid_argument("make_radial_grid: m >= 8");
    RadialGrid g;
    g.dim = N;
    g.radius = R;
    g.m = m;
    return g;
}

SectorOperator build_sector_operator(const RadialGrid& mesh, int ell, double s) {
    if (ell < 0) throw std::invalid_argument("build_sector_operator: ell >= 0");
    if (!(s > 0 && s < 1)) throw std::invalid_argument("build_sector_operator: s in (0,1)");
    const int N = mesh.dim;
    const int m = mesh.m;
    const double delta = mesh.spacing();
    const double cent = static_cast<double>(ell) * (ell + N - 2);

    // conservation form on cell centers: face area factors r_face^{N-1}
    auto face = [&](int j) { return std::pow(j * delta, N - 1); };

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j < m; ++j) {
        const double rj = mesh.r(j);
        const double vol = std::pow(rj, N - 1) * delta * delta;
        double diag = 0.0;
        if (j + 1 < m) {
            const double a = face(j + 1);
            diag += a / vol;
            A(j, j + 1) = -a / vol;
        } else {
            // Dirichlet wall at r = R via ghost reflection g_m = -g_{m-1}
            diag += 2.0 * face(m) / vol;
        }
        if (j > 0) {
            const double a = face(j);
            diag += a / vol;
            A(j, j - 1) = -a / vol;
        } else if (N == 1 && ell % 2 == 1) {
            // odd sector: ghost g_{-1} = -g_0 across r = 0
            diag += 2.0 / (delta * delta);
        }
        // for N > 1 (and N = 1 even sectors) the flux through r = 0 vanishes
        A(j, j) = diag + cent / (rj * rj);
    }

    SectorOperator op;
    op.mesh = mesh;
    op.ell = ell;
    op.s = s;
    op.sqrt_weights = Eigen::VectorXd(m);
    for (int j = 0; j < m; ++j) op.sqrt_weights[j] = std::sqrt(mesh.weight(j));

    Eigen::MatrixXd B(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            B(i, j) = op.sqrt_weights[i] * A(i, j) / op.sqrt_weights[j];
    B = 0.5 * (B + B.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    Eigen::VectorXd lam_s(m);
    for (int j = 0; j < m; ++j) lam_s[j] = std::pow(lam[j], s);
    op.matrix = es.eigenvectors() * lam_s.asDiagonal() * es.eigenvectors().transpose();
    op.matrix = 0.5 * (op.matrix + op.matrix.transpose()).eval();
    return op;
}

void SectorOperator::spectrum(const Eigen::VectorXd& potential, Eigen::VectorXd& evals,
                              Eigen::MatrixXd& evecs) const {
    if (potential.size() != matrix.rows())
        throw std::invalid_argument("SectorOperator::spectrum: potential size mismatch");
    Eigen::MatrixXd C = matrix;
    C.diagonal() += potential;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
    evals = es.eigenvalues();
    // map back to function values: orthonormal in the r^{N-1} dr inner product
    evecs = sqrt_weights.cwiseInverse().asDiagonal() * es.eigenvectors();
}

} // namespace fgs
