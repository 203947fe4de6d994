#ifndef FGS_SPECTRAL_HPP
#define FGS_SPECTRAL_HPP

#include "fgs/grid.hpp"
#include <functional>
#include <utility>
#include <vector>

namespace fgs {

/// The constant in front of the singular-integral form of (-Delta)^s:
/// c_{N,s} = 4^s pi^{-N/2} Gamma(N/2+s)/Gamma(2-s) * s(1-s).
double cns_constant(int N, double s);

/// Forward DFT of a field (unnormalized, FFTW convention).
CArray to_fourier(const Field& u);
/// Inverse DFT; divides by the mode count and drops the imaginary part.
Field from_fourier(const Grid& g, const CArray& coeffs);

/// Apply a radial Fourier multiplier m(|k|^2) to a real field.
Field apply_multiplier(const Field& u, const std::function<double(double)>& m_of_k2);
/// Full complex-transform variant kept as a cross-check for the half-spectrum
/// fast path above.
Field apply_multiplier_c2c_reference(const Field& u,
                                     const std::function<double(double)>& m_of_k2);

/// (-Delta)^s u via the multiplier |k|^{2s}; the zero mode is annihilated.
Field frac_laplacian_apply(const Field& u, double s);

/// ((-Delta)^s + lambda)^{-1} rhs, diagonal in Fourier space.
Field invert_helmholtz(const Field& rhs, double s, double lambda);

/// Spectral partial derivative along an axis (Nyquist mode zeroed).
Field spectral_derivative(const Field& u, int axis);

/// u(. - t) by phase shift; t need not be on-lattice.
Field spectral_shift(const Field& u, const std::vector<double>& t);

/// E(u,v) = sum_k |k|^{2s} u_k conj(v_k) * Plancherel weight   and
/// |u|_lambda^2 = lambda |u|_2^2 + E(u,u).
std::pair<double, double> hs_products(const Field& u, const Field& v, double s,
                                      double lambda);
/// Just the bilinear seminorm part E(u,v).
double dirichlet_form(const Field& u, const Field& v, double s);

/// Trigonometric evaluation of a periodic 1-d sample sequence at arbitrary
/// points. `values` are samples on a uniform grid over [-L, L).
Array eval_trig_series_1d(const Array& values, double L, const Array& points);

/// Values of the field along the positive x1 axis at the given radii,
/// by exact trigonometric interpolation of the axis slice.
Array axis_profile(const Field& u, const Array& radii);
/// The axis slice itself (x1 varies, other coordinates = 0).
Array axis_slice(const Field& u);

/// Resample onto another grid of the same dimension by per-axis
/// trigonometric interpolation. Target points must lie inside the source box.
Field resample_to(const Field& u, const Grid& target);

/// Copy onto a larger box with identical spacing, zero outside the source;
/// the lattices must align (equal spacing, even index offset).
Field embed_centered(const Field& u, const Grid& target);

/// Direct principal-value quadrature of the singular-integral definition
/// (N = 1 only); cross-validation oracle for the multiplier route.
/// The tail beyond the box uses u(y) ~ 0; a symmetric window of total width
/// `cutoff` (at least one cell) around the singularity is excluded and
/// re-added through a second-order local expansion.
Field singular_integral_apply(const Field& u, double s, double cutoff);

/// Minimum-image distance between two lattice sites of a periodic box.
double periodic_distance(const Grid& g, std::int64_t i, std::int64_t j);

/// Quadrature realization of E(u,v) as a double sum over site pairs with the
/// periodic kernel c_{N,s}/d(x,y)^{N+2s}; used where fields are not
/// spectrally smooth (polarized fields) and as a calibration oracle.
double dirichlet_form_quadrature(const Field& u, const Field& v, double s);

} // namespace fgs

#endif
