#ifndef FGS_SPECTRUM_HPP
#define FGS_SPECTRUM_HPP

#include "fgs/eigensolvers.hpp"
#include "fgs/ground_state.hpp"
#include "fgs/radial.hpp"

namespace fgs {

struct SpectrumOptions {
    int nev = 6;
    int max_basis = 160;
    double tol = 1e-9;       // relative Ritz residual
    double pcg_tol = 1e-12;
    int pcg_max = 1200;
    std::uint64_t seed = 777;
};

/// Apply of L+ = (-Delta)^s + lambda - f'(u) on the full grid.
LinearOp make_lplus(const GroundStateRecord& rec, const NonlinearitySpec& spec);
/// Apply of L- = (-Delta)^s + lambda - f(u)/u.
LinearOp make_lminus(const GroundStateRecord& rec, const NonlinearitySpec& spec);

/// Lowest eigenpairs of a symmetric operator on the grid via shift-invert
/// Lanczos; the shift is placed below the spectrum automatically and the
/// shifted solves run preconditioned CG with the free resolvent.
EigenPairs lowest_spectrum(const LinearOp& op, const GroundStateRecord& rec,
                           const SpectrumOptions& opts,
                           const LinearOp& project = nullptr);

struct MorseReport {
    Eigen::VectorXd eigenvalues;       // lowest nev, ascending
    int morse_index = 0;               // eigenvalues below -tol_zero
    int kernel_dim = 0;                // near-zero AND translation-aligned
    double tol_zero = 0;
    std::vector<double> kernel_cosines; // alignment of near-zero modes with
                                        // span of the translation modes
    bool kernel_is_translations = false;
    double mu1 = 0, mu2 = 0;           // lowest eigenvalue / first above kernel
};

/// Morse index and kernel of L+ on the full grid. A near-zero eigenvalue is
/// attributed to the kernel only when its eigenvector aligns with the span
/// of the translation modes (cosine > 0.999).
MorseReport morse_index_report(const GroundStateRecord& rec,
                               const NonlinearitySpec& spec,
                               const SpectrumOptions& opts = {});

/// Dimension of the spherical-harmonic space of degree l in dimension N.
int harmonic_multiplicity(int N, int ell);

struct SectorSpectrum {
    int ell = 0;
    Eigen::VectorXd eigenvalues; // ascending, first `count`
    Eigen::MatrixXd eigenvectors; // on the radial mesh
    RadialGrid mesh;
};

/// Spectrum of L+ restricted to sector l, on a radial mesh of m cells over
/// (0, R); the potential uses the trig-interpolated axis profile of u.
SectorSpectrum sector_spectrum(const GroundStateRecord& rec,
                               const NonlinearitySpec& spec, int ell, int m,
                               int count, double radius = 0);

struct SectorCrosscheck {
    std::vector<SectorSpectrum> sectors; // l = 0 .. lmax
    int morse_sum = 0;                   // negatives weighted by multiplicity
    int kernel_sector = -1;              // sector holding the zero mode (l=1)
    double kernel_value = 0;             // its near-zero eigenvalue
    bool ordered = true;                 // lowest_l strictly increasing in l>=1
};

/// Sector-by-sector account of the Morse index and kernel location.
SectorCrosscheck sector_morse_crosscheck(const GroundStateRecord& rec,
                                         const NonlinearitySpec& spec, int m,
                                         int lmax, double radius = 0);

/// B(v, w) = E(v, w) + lambda int v w - int f'(u) v w.
double bilinear_form(const GroundStateRecord& rec, const NonlinearitySpec& spec,
                     const Field& v, const Field& w);

/// Sign changes of a sampled profile, ignoring entries below
/// floor_rel * max|values|.
int oscillation_count(const Eigen::VectorXd& values, double floor_rel = 1e-9);

struct LminusReport {
    double lowest = 0;         // should vanish to solver accuracy
    double alignment = 0;      // cosine of the lowest mode with u itself
    double second = 0;         // should be positive
};

/// L- is nonnegative with kernel spanned by u; verified on the even subspace
/// of the full grid.
LminusReport lminus_check(const GroundStateRecord& rec,
                          const NonlinearitySpec& spec,
                          const SpectrumOptions& opts = {});

struct PiconeReport {
    double lhs = 0;      // B-form of the odd test function w
    double rhs = 0;      // double integral of the nonnegative density H
    double rel_gap = 0;
    double min_density = 0; // most negative sampled H (should be >= 0)
};

/// Quantitative check (N = 1) of the reflection Picone identity with
/// v = -u' and w = v * phi, phi an even Gaussian window of the given width.
/// Same identity with an explicit even window phi (and its derivative for
/// the diagonal re-insertion); w = (-u') * phi is the odd test function.
PiconeReport picone_check_window(const GroundStateRecord& rec,
                                 const NonlinearitySpec& spec,
                                 const Array& phi, const Array& dphi);

PiconeReport picone_check(const GroundStateRecord& rec,
                          const NonlinearitySpec& spec, double phi_width = 0);

struct SecondModeIdentity {
    double mu2 = 0;
    double lhs = 0;   // mu2 int (phi2^+)^2
    double rhs = 0;   // B(phi2, phi2^+) on the radial mesh
    double rel_gap = 0;
    int sign_changes = 0;
    double value_at_zero = 0; // first mesh cell of phi2 (normalized negative)
};

/// Structure of the second radial eigenfunction: one sign change, negative
/// at the origin, and mu2 |phi2^+|^2 = B(phi2, phi2^+).
SecondModeIdentity second_mode_identity(const GroundStateRecord& rec,
                                        const NonlinearitySpec& spec, int m,
                                        double radius = 0);

} // namespace fgs

#endif
