#ifndef FGS_POLARIZATION_HPP
#define FGS_POLARIZATION_HPP

#include "fgs/ground_state.hpp"

namespace fgs {

/// Lattice reflection across the hyperplane x_axis = a on the periodic box
/// (the hyperplane x_axis = a - L is also fixed). 2a must be a multiple of
/// the grid spacing so the reflection is an exact permutation.
Field reflect(const Field& u, double a, int axis);

/// Two-point rearrangement across the hyperplane: on the far side
/// (x_axis - a mod 2L in (0, L)) take the min of {w, w o sigma}, on the near
/// side the max; fixed-plane points are untouched.
Field polarize(const Field& w, double a, int axis);

struct PolarizationReport {
    double a = 0;
    int axis = 0;
    // L2 norms of positive/negative parts are preserved exactly (pairwise
    // permutation); deviations and a bit-level multiset check
    double l2_plus_dev = 0, l2_minus_dev = 0;
    bool multiset_preserved = false;
    // [w^+]^2 - [w_a^+]^2 and the minus-part analog (>= 0 expected)
    double seminorm_drop_plus = 0, seminorm_drop_minus = 0;
    // B(w, w^+) - B(w_a, w_a^+) and -B(w, w^-) - B(w_a, w_a^-)
    double form_gap_plus = 0, form_gap_minus = 0;
    // int f'(u) [(w_a^+)^2 - (w^+)^2] and int f'(u) [(w^-)^2 - (w_a^-)^2]
    double weighted_gap_plus = 0, weighted_gap_minus = 0;
    double tolerance = 1e-6;
    bool all_pass = false;
};

/// Quantitative check of the polarization inequalities for a test field w
/// against the ground state u (radial decreasing, centered, a > 0 so the
/// near side contains the center). Seminorms use the periodic double-sum
/// kernel since polarized fields are not spectrally smooth. N in {1, 2}.
PolarizationReport polarization_report(const GroundStateRecord& rec,
                                       const NonlinearitySpec& spec,
                                       const Field& w, double a, int axis);

/// Calibration: relative gap between the double-sum and spectral seminorms
/// on a smooth field, used to justify the inequality tolerance.
double seminorm_quadrature_gap(const Field& u, double s);

} // namespace fgs

#endif
