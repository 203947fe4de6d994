#ifndef FGS_GROUND_STATE_HPP
#define FGS_GROUND_STATE_HPP

#include "fgs/nonlinearity.hpp"
#include "fgs/spectral.hpp"
#include <optional>
#include <stdexcept>

namespace fgs {

struct SolverOptions {
    int picard_max = 300;
    double picard_tol = 1e-8;     // relative iterate change to hand off
    int newton_max = 60;
    double newton_tol = 1e-11;    // |G(u)|_2 <= tol * lambda * |u|_2
    int minres_max = 500;
    std::uint64_t seed = 12345;
    double init_width = 0;        // Gaussian width of the seed; 0 = automatic
    double init_amplitude = 0;    // 0 = projected onto the constraint set
    double positivity_tol = 1e-6; // allowed negative dip relative to the peak
};

struct GroundStateRecord {
    Field u;
    double s = 0, lambda = 0;
    int picard_iterations = 0, newton_iterations = 0;
    double residual_norm = 0;     // |(-Delta)^s u + lambda u - f(u)|_{L2}
    double residual_rel = 0;      // residual_norm / (lambda |u|_{L2})
    double kinetic = 0;           // E(u, u)
    double mass = 0;              // int u^2
    double potential = 0;         // int F(u)
    double action = 0;            // J(u)
    double max_value = 0;
    double min_value = 0;
    bool converged = false;
};

struct SolverError : std::runtime_error {
    GroundStateRecord last;
    SolverError(const std::string& what, GroundStateRecord rec)
        : std::runtime_error(what), last(std::move(rec)) {}
};

/// Scaling t* > 0 placing t*u on the natural constraint
/// |tu|_lambda^2 = int f(tu) tu; throws if u is not admissible.
double nehari_project(const Field& u, double s, double lambda,
                      const NonlinearitySpec& spec);

/// Average of the per-axis reflections x_d -> -x_d; projects onto fields
/// even in every coordinate.
Field symmetrize_even(const Field& u);

/// Positive even-symmetric solution of (-Delta)^s u + lambda u = f(u) by
/// constrained fixed-point iteration followed by Newton-Krylov polish.
GroundStateRecord solve_ground_state(const Grid& grid, double s, double lambda,
                                     const NonlinearitySpec& spec,
                                     const SolverOptions& opts = {},
                                     const Field* initial = nullptr);

/// Newton polish restricted to fields even in every axis, carried out on the
/// quarter domain [0, L]^N with cosine transforms. Uses a quarter of the
/// memory (N = 2) of the full-grid Newton stage; intended for large lattices
/// after a coarse warm start.
GroundStateRecord newton_polish_even(const Field& initial, double s,
                                     double lambda,
                                     const NonlinearitySpec& spec,
                                     const SolverOptions& opts = {});

/// Equation residual field G(u) = (-Delta)^s u + lambda u - f(u).
Field equation_residual(const Field& u, double s, double lambda,
                        const NonlinearitySpec& spec);

/// (N-2s)/2 E(u,u) + N/2 lambda int u^2 - N int F(u), relative to the
/// largest of the three terms.
double pohozaev_residual(const GroundStateRecord& rec,
                         const NonlinearitySpec& spec);

struct DecayFit {
    double rate = 0;       // exponent p in u(r) ~ amplitude * r^{-p}
    double amplitude = 0;
    double rms_misfit = 0; // of log u over the window
};

/// Least-squares power-law fit of the axis profile over
/// r in [w_lo, w_hi] * half_width.
DecayFit decay_fit(const Field& u, double w_lo = 0.08, double w_hi = 0.16,
                   int n_samples = 64);

struct RadializeResult {
    Field u;            // recentered, orbit-averaged field
    double asymmetry = 0; // relative L2 change under orbit averaging
    std::vector<double> center; // detected maximum location
};

/// Recenter the maximum at the origin (integer roll plus spectral phase
/// shift) and average over lattice orbits of equal distance to the origin.
RadializeResult recenter_and_radialize(const Field& u);

} // namespace fgs

#endif
