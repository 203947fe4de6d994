#include "fgs/nonlinearity.hpp"

#include <cmath>
#include <limits>

namespace fgs {

Array NonlinearitySpec::f_of(const Array& v) const {
    Array out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = f_signed(v[i]);
    return out;
}

Array NonlinearitySpec::fprime_of(const Array& v) const {
    Array out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = fprime_signed(v[i]);
    return out;
}

Array NonlinearitySpec::F_of(const Array& v) const {
    Array out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = F_even(v[i]);
    return out;
}

NonlinearitySpec make_pure_power(double r) {
    if (r <= 1) throw std::invalid_argument("make_pure_power: r > 1 required");
    NonlinearitySpec spec;
    spec.kind = "pure_power";
    spec.q = r;
    spec.r = r;
    spec.q0 = r;
    spec.f = [r](double t) { return std::pow(t, r - 1.0); };
    spec.fprime = [r](double t) { return (r - 1.0) * std::pow(t, r - 2.0); };
    spec.F = [r](double t) { return std::pow(t, r) / r; };
    return spec;
}

NonlinearitySpec make_power_sum(const std::vector<double>& powers,
                                const std::vector<double>& coeffs) {
    if (powers.empty() || powers.size() != coeffs.size())
        throw std::invalid_argument("make_power_sum: need matching nonempty lists");
    for (size_t i = 0; i < powers.size(); ++i) {
        if (powers[i] <= 1) throw std::invalid_argument("make_power_sum: powers > 1");
        if (coeffs[i] <= 0) throw std::invalid_argument("make_power_sum: coeffs > 0");
        if (i > 0 && powers[i] <= powers[i - 1])
            throw std::invalid_argument("make_power_sum: powers strictly ascending");
    }
    NonlinearitySpec spec;
    spec.kind = "power_sum";
    spec.q = powers.front();
    spec.r = powers.back();
    // f(t)/t^{q-1} = sum c_i t^{p_i - q} is nondecreasing since p_i >= q
    spec.q0 = powers.front();
    auto p = powers;
    auto c = coeffs;
    spec.f = [p, c](double t) {
        double acc = 0;
        for (size_t i = 0; i < p.size(); ++i) acc += c[i] * std::pow(t, p[i] - 1.0);
        return acc;
    };
    spec.fprime = [p, c](double t) {
        double acc = 0;
        for (size_t i = 0; i < p.size(); ++i)
            acc += c[i] * (p[i] - 1.0) * std::pow(t, p[i] - 2.0);
        return acc;
    };
    spec.F = [p, c](double t) {
        double acc = 0;
        for (size_t i = 0; i < p.size(); ++i) acc += c[i] * std::pow(t, p[i]) / p[i];
        return acc;
    };
    return spec;
}

NonlinearitySpec make_rational_example(double q, double r) {
    if (!(q > 3 && r > q))
        throw std::invalid_argument("make_rational_example: need 3 < q < r");
    NonlinearitySpec spec;
    spec.kind = "rational_example";
    spec.r = r;
    // F(t) = t^r/r + t^q/(1+t); differentiate the quotient directly
    spec.F = [q, r](double t) {
        return std::pow(t, r) / r + std::pow(t, q) / (1.0 + t);
    };
    spec.f = [q, r](double t) {
        if (t == 0) return 0.0;
        double tq = std::pow(t, q - 1.0);
        return std::pow(t, r - 1.0) + tq * (q + (q - 1.0) * t) / ((1.0 + t) * (1.0 + t));
    };
    spec.fprime = [q, r](double t) {
        if (t == 0) return 0.0;
        double tq = std::pow(t, q - 2.0);
        double d = 1.0 + t;
        // d/dt [ t^{q-1} (q + (q-1) t) / (1+t)^2 ], quotient rule with the
        // t^{q-2} factor pulled out
        double num = (q - 1.0) * d * d * (q + (q - 1.0) * t) +
                     t * (q - 1.0) * d * d - 2.0 * t * d * (q + (q - 1.0) * t);
        return (r - 1.0) * std::pow(t, r - 2.0) + tq * num / (d * d * d * d);
    };
    // the formula's q is only the small-t limit of f(t)t/F(t); the quotient
    // dips below it near t ~ 0.4, so certify the structural exponent as the
    // sampled infimum (it stays above 3 for q > 3)
    double q_inf = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 20000; ++i) {
        const double t = 1e-8 * std::exp(std::log(1e16) / 19999 * i);
        q_inf = std::min(q_inf, spec.f(t) * t / spec.F(t));
    }
    spec.q = q_inf - 1e-6;
    spec.q0 = 0.5 * (spec.q + r);
    return spec;
}

NonlinearitySpec make_custom(double q, double r, double q0,
                             std::function<double(double)> f,
                             std::function<double(double)> fprime,
                             std::function<double(double)> F) {
    if (!(q > 1 && r >= q && q0 > 1))
        throw std::invalid_argument("make_custom: need 1 < q <= r, 1 < q0");
    NonlinearitySpec spec;
    spec.kind = "custom";
    spec.q = q;
    spec.r = r;
    spec.q0 = q0;
    spec.f = std::move(f);
    spec.fprime = std::move(fprime);
    spec.F = std::move(F);
    return spec;
}

HypothesisReport validate_hypotheses(const NonlinearitySpec& spec, int N, double s,
                                     int samples, double t_min, double t_max) {
    if (samples < 10) throw std::invalid_argument("validate_hypotheses: samples >= 10");
    HypothesisReport rep;
    rep.critical_exponent = (N > 2.0 * s) ? 2.0 * N / (N - 2.0 * s)
                                          : std::numeric_limits<double>::infinity();
    rep.admissible = spec.r < rep.critical_exponent && spec.q > 2 &&
                     spec.q <= spec.q0 && spec.q0 <= spec.r;

    Array t(samples);
    const double lr = std::log(t_max / t_min) / (samples - 1);
    for (int i = 0; i < samples; ++i) t[i] = t_min * std::exp(lr * i);

    auto record = [&rep](const std::string& name, double worst, double at,
                         bool pass) {
        HypothesisCheck c;
        c.name = name;
        c.worst = worst;
        c.worst_point = at;
        c.pass = pass;
        rep.checks.push_back(c);
    };
    const double inf = std::numeric_limits<double>::infinity();

    // convexity: f' nondecreasing, and f'(t)t strictly above f(t)
    double worst_mono = inf, at_mono = 0;
    double worst_strict = inf, at_strict = 0;
    // sandwich q F(t) <= f(t) t <= r F(t) on t > 0
    double worst_lo = inf, at_lo = 0;
    double worst_hi = inf, at_hi = 0;
    // remainder g(t) = f(t) - t^{r-1}: nonnegative and bounded by
    // C (t^{q-1} + t^{q0-1}) with the smallest feasible C recorded
    double worst_g = inf, at_g = 0;
    double feasible_C = 0, at_C = 0;
    // derivative consistency and F' = f via centered differences
    double worst_fp = inf, at_fp = 0;
    double worst_Fp = inf, at_Fp = 0;
    double prev_fp = -inf;
    for (int i = 0; i < samples; ++i) {
        const double ti = t[i];
        const double fi = spec.f(ti), Fi = spec.F(ti), fpi = spec.fprime(ti);
        const double scale = std::max(std::abs(fi * ti), 1e-300);

        if (i > 0) {
            const double m = (fpi - prev_fp) / std::max(std::abs(fpi), 1e-300) + 1e-12;
            if (m < worst_mono) { worst_mono = m; at_mono = ti; }
        }
        prev_fp = fpi;
        {
            const double m = (fpi * ti - fi) / scale;
            if (m < worst_strict) { worst_strict = m; at_strict = ti; }
        }
        double m = (fi * ti - spec.q * Fi) / scale + 1e-12;
        if (m < worst_lo) { worst_lo = m; at_lo = ti; }
        m = (spec.r * Fi - fi * ti) / scale + 1e-12;
        if (m < worst_hi) { worst_hi = m; at_hi = ti; }

        const double g = fi - std::pow(ti, spec.r - 1.0);
        m = g / std::max(std::abs(fi), 1e-300) + 1e-9;
        if (m < worst_g) { worst_g = m; at_g = ti; }
        const double bound = std::pow(ti, spec.q - 1.0) + std::pow(ti, spec.q0 - 1.0);
        const double C = std::max(g, 0.0) / bound;
        if (C > feasible_C) { feasible_C = C; at_C = ti; }

        const double dt = 1e-6 * ti;
        const double fd_f = (spec.f(ti + dt) - spec.f(ti - dt)) / (2 * dt);
        m = 1e-3 - std::abs(fd_f - fpi) / std::max(std::abs(fd_f), 1.0);
        if (m < worst_fp) { worst_fp = m; at_fp = ti; }
        const double fd_F = (spec.F(ti + dt) - spec.F(ti - dt)) / (2 * dt);
        m = 1e-3 - std::abs(fd_F - fi) / std::max(std::abs(fd_F), 1.0);
        if (m < worst_Fp) { worst_Fp = m; at_Fp = ti; }
    }
    record("fprime_monotone", worst_mono, at_mono, worst_mono >= 0);
    record("fprime_t_exceeds_f", worst_strict, at_strict, worst_strict > 0);
    record("growth_lower_qF_le_ft", worst_lo, at_lo, worst_lo >= 0);
    record("growth_upper_ft_le_rF", worst_hi, at_hi, worst_hi >= 0);
    record("remainder_nonneg", worst_g, at_g, worst_g >= 0);
    record("remainder_bound_constant", feasible_C, at_C,
           std::isfinite(feasible_C) && feasible_C < 1e12);
    record("fprime_consistent", worst_fp, at_fp, worst_fp >= 0);
    record("F_primitive_of_f", worst_Fp, at_Fp, worst_Fp >= 0);
    record("odd_extension", spec.f_signed(-1.5) + spec.f(1.5) == 0 ? 1.0 : -1.0,
           1.5, spec.f_signed(-1.5) + spec.f(1.5) == 0);
    record("vanishing_at_zero", std::abs(spec.f(1e-8)), 0.0,
           std::abs(spec.f(1e-8)) <= 1e-8);
    record("subcritical", rep.critical_exponent - spec.r, spec.r, rep.admissible);

    rep.all_pass = rep.admissible;
    for (const auto& c : rep.checks) rep.all_pass = rep.all_pass && c.pass;
    return rep;
}

} // namespace fgs
