#ifndef FGS_NONLINEARITY_HPP
#define FGS_NONLINEARITY_HPP

#include "fgs/grid.hpp"
#include <functional>
#include <string>
#include <vector>

namespace fgs {

/// Source term of the equation: odd, superlinear-subcritical growth with
/// convex quotient structure. `q` and `r` bound the growth of f(t)t / F(t)
/// from below/above (2 < q <= r < 2N/(N-2s)_+), and `q0` is the convexity
/// exponent: t -> f(t)/t^{q0-1} nondecreasing on t > 0.
struct NonlinearitySpec {
    std::string kind;  // "pure_power", "power_sum", "rational_example", "custom"
    double q = 0, r = 0, q0 = 0;
    std::function<double(double)> f;       // f(t), defined for t >= 0
    std::function<double(double)> fprime;  // f'(t)
    std::function<double(double)> F;       // primitive, F(0) = 0

    // odd extensions
    double f_signed(double t) const { return t >= 0 ? f(t) : -f(-t); }
    double fprime_signed(double t) const { return fprime(std::abs(t)); }
    double F_even(double t) const { return F(std::abs(t)); }

    Array f_of(const Array& v) const;
    Array fprime_of(const Array& v) const;
    Array F_of(const Array& v) const;
};

/// f(t) = t^{r-1}. q = q0 = r.
NonlinearitySpec make_pure_power(double r);
/// f(t) = sum_i c_i t^{p_i - 1}, c_i > 0, powers sorted ascending.
NonlinearitySpec make_power_sum(const std::vector<double>& powers,
                                const std::vector<double>& coeffs);
/// F(t) = t^r / r + t^q / (1 + t) with 3 < q < r; convexity exponent
/// taken at (q + r) / 2.
NonlinearitySpec make_rational_example(double q, double r);
NonlinearitySpec make_custom(double q, double r, double q0,
                             std::function<double(double)> f,
                             std::function<double(double)> fprime,
                             std::function<double(double)> F);

struct HypothesisCheck {
    std::string name;
    bool pass = false;
    double worst = 0;       // most violating margin observed (>= 0 means pass)
    double worst_point = 0; // sample where it occurred
};

struct HypothesisReport {
    bool admissible = false;     // q, r below the critical exponent
    double critical_exponent = 0; // 2N/(N-2s), +inf encoded as a large value
    bool all_pass = false;
    std::vector<HypothesisCheck> checks;
};

/// Sampled verification of the structural hypotheses on a log-spaced grid of
/// t values: continuity/oddness, growth pinch q <= f(t)t/F(t) <= r,
/// monotonicity of f(t)/t^{q0-1}, consistency f' vs finite differences,
/// F' = f, and subcriticality of (q, r) for the given (N, s).
HypothesisReport validate_hypotheses(const NonlinearitySpec& spec, int N, double s,
                                     int samples = 2000, double t_min = 1e-6,
                                     double t_max = 1e3);

} // namespace fgs

#endif
