#include "fgs/spectral.hpp"

#include <fftw3.h>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>

namespace fgs {

namespace {

// One cached c2c plan pair per (dim, n). FFTW_ESTIMATE keeps plan selection
// deterministic across runs.
struct PlanEntry {
    fftw_complex* buf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    std::int64_t size = 0;
};

std::mutex g_plan_mutex;
std::map<std::pair<int, int>, PlanEntry>& plan_cache() {
    static std::map<std::pair<int, int>, PlanEntry> cache;
    return cache;
}

PlanEntry& get_plan(const Grid& g) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto key = std::make_pair(g.dim, g.n);
    auto& cache = plan_cache();
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    PlanEntry e;
    e.size = g.size();
    e.buf = fftw_alloc_complex(static_cast<size_t>(e.size));
    int dims[3] = {g.n, g.n, g.n};
    e.fwd = fftw_plan_dft(g.dim, dims, e.buf, e.buf, FFTW_FORWARD, FFTW_ESTIMATE);
    e.bwd = fftw_plan_dft(g.dim, dims, e.buf, e.buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    return cache.emplace(key, e).first->second;
}

// Real-to-complex plan pair per (dim, n) for the multiplier fast path; the
// last axis stores n/2 + 1 complex bins.
struct RealPlanEntry {
    double* re = nullptr;
    fftw_complex* cc = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    std::int64_t nreal = 0, ncomplex = 0;
};

std::map<std::pair<int, int>, RealPlanEntry>& real_plan_cache() {
    static std::map<std::pair<int, int>, RealPlanEntry> cache;
    return cache;
}

RealPlanEntry& get_real_plan(const Grid& g) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto key = std::make_pair(g.dim, g.n);
    auto& cache = real_plan_cache();
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    RealPlanEntry e;
    e.nreal = g.size();
    e.ncomplex = (e.nreal / g.n) * (g.n / 2 + 1);
    e.re = fftw_alloc_real(static_cast<size_t>(e.nreal));
    e.cc = fftw_alloc_complex(static_cast<size_t>(e.ncomplex));
    int dims[3] = {g.n, g.n, g.n};
    e.fwd = fftw_plan_dft_r2c(g.dim, dims, e.re, e.cc, FFTW_ESTIMATE);
    e.bwd = fftw_plan_dft_c2r(g.dim, dims, e.cc, e.re, FFTW_ESTIMATE);
    return cache.emplace(key, e).first->second;
}

} // namespace

double cns_constant(int N, double s) {
    if (N < 1 || N > 3) throw std::invalid_argument("cns_constant: N in {1,2,3}");
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("cns_constant: s in (0,1)");
    return std::pow(4.0, s) * std::pow(M_PI, -0.5 * N) *
           std::tgamma(0.5 * N + s) / std::tgamma(2.0 - s) * s * (1.0 - s);
}

CArray to_fourier(const Field& u) {
    PlanEntry& e = get_plan(u.grid);
    for (std::int64_t i = 0; i < e.size; ++i) {
        e.buf[i][0] = u.values[i];
        e.buf[i][1] = 0.0;
    }
    fftw_execute(e.fwd);
    CArray out(e.size);
    for (std::int64_t i = 0; i < e.size; ++i)
        out[i] = std::complex<double>(e.buf[i][0], e.buf[i][1]);
    return out;
}

Field from_fourier(const Grid& g, const CArray& coeffs) {
    if (coeffs.size() != g.size())
        throw std::invalid_argument("from_fourier: size mismatch");
    PlanEntry& e = get_plan(g);
    for (std::int64_t i = 0; i < e.size; ++i) {
        e.buf[i][0] = coeffs[i].real();
        e.buf[i][1] = coeffs[i].imag();
    }
    fftw_execute(e.bwd);
    Field out(g);
    const double inv = 1.0 / static_cast<double>(e.size);
    for (std::int64_t i = 0; i < e.size; ++i) out.values[i] = e.buf[i][0] * inv;
    return out;
}

Field apply_multiplier(const Field& u, const std::function<double(double)>& m_of_k2) {
    const Grid& g = u.grid;
    RealPlanEntry& e = get_real_plan(g);
    std::copy(u.values.data(), u.values.data() + e.nreal, e.re);
    fftw_execute(e.fwd);

    const int n = g.n, nh = g.n / 2 + 1;
    Array k2ax(n);
    for (int j = 0; j < n; ++j) {
        const double k = g.wavenumber(j);
        k2ax[j] = k * k;
    }
    const double inv = 1.0 / static_cast<double>(e.nreal);
    std::int64_t idx = 0;
    const int n0 = (g.dim >= 3) ? n : 1;
    const int n1 = (g.dim >= 2) ? n : 1;
    for (int i0 = 0; i0 < n0; ++i0) {
        const double k2_0 = (g.dim >= 3) ? k2ax[i0] : 0.0;
        for (int i1 = 0; i1 < n1; ++i1) {
            const double k2_01 = k2_0 + ((g.dim >= 2) ? k2ax[i1] : 0.0);
            for (int i2 = 0; i2 < nh; ++i2, ++idx) {
                const double m = m_of_k2(k2_01 + k2ax[i2]) * inv;
                e.cc[idx][0] *= m;
                e.cc[idx][1] *= m;
            }
        }
    }
    fftw_execute(e.bwd);
    Field out(g);
    std::copy(e.re, e.re + e.nreal, out.values.data());
    return out;
}

Field apply_multiplier_c2c_reference(const Field& u,
                                     const std::function<double(double)>& m_of_k2) {
    const Grid& g = u.grid;
    CArray c = to_fourier(u);
    int ix[3];
    for (std::int64_t i = 0; i < g.size(); ++i) {
        g.unflatten(i, ix);
        double k2 = 0.0;
        for (int d = 0; d < g.dim; ++d) {
            double k = g.wavenumber(ix[d]);
            k2 += k * k;
        }
        c[i] *= m_of_k2(k2);
    }
    return from_fourier(g, c);
}

Field frac_laplacian_apply(const Field& u, double s) {
    if (!(s > 0.0 && s < 1.0))
        throw std::invalid_argument("frac_laplacian_apply: s in (0,1)");
    return apply_multiplier(u, [s](double k2) { return k2 > 0 ? std::pow(k2, s) : 0.0; });
}

Field invert_helmholtz(const Field& rhs, double s, double lambda) {
    if (lambda <= 0) throw std::invalid_argument("invert_helmholtz: lambda > 0");
    return apply_multiplier(rhs, [s, lambda](double k2) {
        return 1.0 / ((k2 > 0 ? std::pow(k2, s) : 0.0) + lambda);
    });
}

Field spectral_derivative(const Field& u, int axis) {
    const Grid& g = u.grid;
    if (axis < 0 || axis >= g.dim)
        throw std::invalid_argument("spectral_derivative: bad axis");
    CArray c = to_fourier(u);
    int ix[3];
    for (std::int64_t i = 0; i < g.size(); ++i) {
        g.unflatten(i, ix);
        // Nyquist mode has no well-defined odd derivative; zero it.
        if (ix[axis] == g.n / 2) {
            c[i] = 0.0;
        } else {
            double k = g.wavenumber(ix[axis]);
            c[i] *= std::complex<double>(0.0, k);
        }
    }
    return from_fourier(g, c);
}

Field spectral_shift(const Field& u, const std::vector<double>& t) {
    const Grid& g = u.grid;
    if (static_cast<int>(t.size()) != g.dim)
        throw std::invalid_argument("spectral_shift: offset dimension mismatch");
    CArray c = to_fourier(u);
    int ix[3];
    for (std::int64_t i = 0; i < g.size(); ++i) {
        g.unflatten(i, ix);
        double phase = 0.0;
        for (int d = 0; d < g.dim; ++d) phase -= g.wavenumber(ix[d]) * t[d];
        c[i] *= std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return from_fourier(g, c);
}

std::pair<double, double> hs_products(const Field& u, const Field& v, double s,
                                      double lambda) {
    require_same_grid(u, v);
    const Grid& g = u.grid;
    RealPlanEntry& e = get_real_plan(g);
    std::copy(u.values.data(), u.values.data() + e.nreal, e.re);
    fftw_execute(e.fwd);
    CArray cu(e.ncomplex);
    for (std::int64_t i = 0; i < e.ncomplex; ++i)
        cu[i] = std::complex<double>(e.cc[i][0], e.cc[i][1]);
    CArray cv;
    if (&u != &v) {
        std::copy(v.values.data(), v.values.data() + e.nreal, e.re);
        fftw_execute(e.fwd);
        cv.resize(e.ncomplex);
        for (std::int64_t i = 0; i < e.ncomplex; ++i)
            cv[i] = std::complex<double>(e.cc[i][0], e.cc[i][1]);
    }
    const CArray& cvr = (&u == &v) ? cu : cv;

    const int n = g.n, nh = g.n / 2 + 1;
    Array k2ax(n);
    for (int j = 0; j < n; ++j) {
        const double k = g.wavenumber(j);
        k2ax[j] = k * k;
    }
    const double w = g.cell_volume() / static_cast<double>(g.size());
    double form = 0.0, uu = 0.0;
    std::int64_t idx = 0;
    const int n0 = (g.dim >= 3) ? n : 1;
    const int n1 = (g.dim >= 2) ? n : 1;
    for (int i0 = 0; i0 < n0; ++i0) {
        const double k2_0 = (g.dim >= 3) ? k2ax[i0] : 0.0;
        for (int i1 = 0; i1 < n1; ++i1) {
            const double k2_01 = k2_0 + ((g.dim >= 2) ? k2ax[i1] : 0.0);
            for (int i2 = 0; i2 < nh; ++i2, ++idx) {
                const double k2 = k2_01 + k2ax[i2];
                if (k2 <= 0) continue;
                // interior last-axis bins stand for a conjugate pair
                const double pair = (i2 == 0 || i2 == n / 2) ? 1.0 : 2.0;
                const double m = pair * std::pow(k2, s);
                form += m * (cu[idx] * std::conj(cvr[idx])).real();
                uu += m * std::norm(cu[idx]);
            }
        }
    }
    form *= w;
    uu *= w;
    double l2 = g.cell_volume() * u.values.square().sum();
    return {form, lambda * l2 + uu};
}

double dirichlet_form(const Field& u, const Field& v, double s) {
    return hs_products(u, v, s, 1.0).first;
}

Array eval_trig_series_1d(const Array& values, double L, const Array& points) {
    const int n = static_cast<int>(values.size());
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("eval_trig_series_1d: even n >= 2 required");
    fftw_complex* buf = fftw_alloc_complex(static_cast<size_t>(n));
    fftw_plan p = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    for (int i = 0; i < n; ++i) {
        buf[i][0] = values[i];
        buf[i][1] = 0.0;
    }
    fftw_execute(p);
    // coeffs ordered by frequency -n/2 .. n/2-1 for a Horner sweep
    std::vector<std::complex<double>> c(static_cast<size_t>(n));
    for (int m = 0; m < n; ++m) {
        int src = (m - n / 2 + n) % n; // FFT bin holding frequency m - n/2
        c[static_cast<size_t>(m)] = std::complex<double>(buf[src][0], buf[src][1]);
    }
    fftw_destroy_plan(p);
    fftw_free(buf);

    Array out(points.size());
    const double inv_n = 1.0 / n;
    for (Eigen::Index pi = 0; pi < points.size(); ++pi) {
        const double theta = M_PI * (points[pi] + L) / L; // sample 0 sits at x = -L
        const std::complex<double> z(std::cos(theta), std::sin(theta));
        std::complex<double> acc = 0.0;
        for (int m = n - 1; m >= 0; --m) acc = acc * z + c[static_cast<size_t>(m)];
        // multiply by z^{-n/2} to restore the frequency offset
        const double phi = -0.5 * n * theta;
        acc *= std::complex<double>(std::cos(phi), std::sin(phi));
        out[pi] = acc.real() * inv_n;
    }
    return out;
}

Array axis_slice(const Field& u) {
    const Grid& g = u.grid;
    Array line(g.n);
    int ix[3] = {0, 0, 0};
    for (int d = 1; d < g.dim; ++d) ix[d] = g.n / 2; // coord 0 on off axes
    for (int i = 0; i < g.n; ++i) {
        ix[0] = i;
        line[i] = u.values[g.flatten(ix)];
    }
    return line;
}

Array axis_profile(const Field& u, const Array& radii) {
    return eval_trig_series_1d(axis_slice(u), u.grid.half_width, radii);
}

namespace {

// Fourier zero-padding onto a finer lattice over the same box; source
// Nyquist modes are split evenly between the +-n/2 images.
Field upsample_same_box(const Field& u, const Grid& target) {
    const Grid& src = u.grid;
    const int ns = src.n, nt = target.n;
    CArray in = to_fourier(u);
    // per-axis frequency relocation: (src index, dst index, weight)
    struct Map { int dst[2]; double w[2]; int count; };
    std::vector<Map> maps(static_cast<size_t>(ns));
    for (int j = 0; j < ns; ++j) {
        Map& m = maps[static_cast<size_t>(j)];
        if (j < ns / 2) {
            m.dst[0] = j; m.w[0] = 1.0; m.count = 1;
        } else if (j > ns / 2) {
            m.dst[0] = j + nt - ns; m.w[0] = 1.0; m.count = 1;
        } else {
            m.dst[0] = ns / 2;      m.w[0] = 0.5;
            m.dst[1] = nt - ns / 2; m.w[1] = 0.5;
            m.count = 2;
        }
    }
    CArray out = CArray::Zero(target.size());
    int ix[3];
    const double scale = static_cast<double>(target.size()) /
                         static_cast<double>(src.size());
    for (std::int64_t i = 0; i < src.size(); ++i) {
        src.unflatten(i, ix);
        const std::complex<double> v = in[i] * scale;
        int choice[3] = {0, 0, 0};
        while (true) {
            std::int64_t flat = 0;
            double w = 1.0;
            for (int d = 0; d < src.dim; ++d) {
                const Map& m = maps[static_cast<size_t>(ix[d])];
                flat = flat * nt + m.dst[choice[d]];
                w *= m.w[choice[d]];
            }
            out[flat] += v * w;
            int d = 0;
            for (; d < src.dim; ++d) {
                if (++choice[d] < maps[static_cast<size_t>(ix[d])].count) break;
                choice[d] = 0;
            }
            if (d == src.dim) break;
        }
    }
    return from_fourier(target, out);
}

} // namespace

Field embed_centered(const Field& u, const Grid& target) {
    const Grid& src = u.grid;
    if (target.dim != src.dim)
        throw std::invalid_argument("embed_centered: dimension mismatch");
    if (target.n < src.n)
        throw std::invalid_argument("embed_centered: target lattice smaller than source");
    if (std::abs(target.spacing() - src.spacing()) > 1e-12 * src.spacing())
        throw std::invalid_argument("embed_centered: spacings differ");
    if ((target.n - src.n) % 2 != 0)
        throw std::invalid_argument("embed_centered: lattices cannot be aligned");
    const int off = (target.n - src.n) / 2;
    Field out(target); // zero fill outside the source box
    int ix[3];
    for (std::int64_t i = 0; i < src.size(); ++i) {
        src.unflatten(i, ix);
        int tx[3] = {0, 0, 0};
        for (int d = 0; d < src.dim; ++d) tx[d] = ix[d] + off;
        out.values[target.flatten(tx)] = u.values[i];
    }
    return out;
}

Field resample_to(const Field& u, const Grid& target) {
    const Grid& src = u.grid;
    if (target.dim != src.dim)
        throw std::invalid_argument("resample_to: dimension mismatch");
    if (target.half_width > src.half_width + 1e-12 * src.half_width)
        throw std::invalid_argument("resample_to: target box exceeds source box");
    if (std::abs(target.half_width - src.half_width) <=
            1e-12 * src.half_width &&
        target.n >= src.n)
        return upsample_same_box(u, target);
    Array targets(target.n);
    for (int i = 0; i < target.n; ++i) targets[i] = target.coord(i);

    // sweep axes; `data` holds a row-major array of mixed shape
    std::vector<double> data(u.values.data(), u.values.data() + u.values.size());
    int shape[3] = {src.n, src.n, src.n};
    for (int axis = 0; axis < src.dim; ++axis) {
        std::int64_t pre = 1, post = 1;
        for (int d = 0; d < axis; ++d) pre *= shape[d];
        for (int d = axis + 1; d < src.dim; ++d) post *= shape[d];
        const int n_in = shape[axis];
        std::vector<double> next(static_cast<size_t>(pre * target.n * post));
        Array line(n_in);
        for (std::int64_t a = 0; a < pre; ++a)
            for (std::int64_t b = 0; b < post; ++b) {
                for (int i = 0; i < n_in; ++i)
                    line[i] = data[static_cast<size_t>((a * n_in + i) * post + b)];
                Array vals = eval_trig_series_1d(line, src.half_width, targets);
                for (int i = 0; i < target.n; ++i)
                    next[static_cast<size_t>((a * target.n + i) * post + b)] = vals[i];
            }
        data.swap(next);
        shape[axis] = target.n;
    }
    Field out(target);
    for (std::int64_t i = 0; i < target.size(); ++i) out.values[i] = data[static_cast<size_t>(i)];
    return out;
}

Field singular_integral_apply(const Field& u, double s, double cutoff) {
    const Grid& g = u.grid;
    if (g.dim != 1)
        throw std::invalid_argument("singular_integral_apply: N = 1 only");
    const int n = g.n;
    const double h = g.spacing();
    const double L = g.half_width;
    const double c = cns_constant(1, s);
    // exclude m cells each side; effective continuum window half-width
    const int m = std::max(0, static_cast<int>(std::llround(cutoff / (2.0 * h) - 0.5)));
    const double we = (m + 0.5) * h;

    Field d2 = apply_multiplier(u, [](double k2) { return -k2; });
    Field out(g);
    for (int i = 0; i < n; ++i) {
        const double xi = g.coord(i);
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            if (std::abs(j - i) <= m) continue;
            const double d = std::abs(xi - g.coord(j));
            acc += (u.values[i] - u.values[j]) * std::pow(d, -1.0 - 2.0 * s);
        }
        acc *= h;
        // window re-insertion from the local quadratic expansion
        acc -= d2.values[i] * std::pow(we, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
        // tails beyond the sampled box, with u ~ 0 there
        const double right = L - 0.5 * h - xi;
        const double left = L + 0.5 * h + xi;
        if (right > 0) acc += u.values[i] * std::pow(right, -2.0 * s) / (2.0 * s);
        if (left > 0) acc += u.values[i] * std::pow(left, -2.0 * s) / (2.0 * s);
        out.values[i] = c * acc;
    }
    return out;
}

double periodic_distance(const Grid& g, std::int64_t i, std::int64_t j) {
    int a[3], b[3];
    g.unflatten(i, a);
    g.unflatten(j, b);
    const double span = 2.0 * g.half_width;
    double d2 = 0.0;
    for (int d = 0; d < g.dim; ++d) {
        double dd = std::abs(a[d] - b[d]) * g.spacing();
        dd = std::min(dd, span - dd);
        d2 += dd * dd;
    }
    return std::sqrt(d2);
}

double dirichlet_form_quadrature(const Field& u, const Field& v, double s) {
    require_same_grid(u, v);
    const Grid& g = u.grid;
    const double c = cns_constant(g.dim, s);
    const double w2 = g.cell_volume() * g.cell_volume();
    const std::int64_t sz = g.size();
    double acc = 0.0;
    for (std::int64_t i = 0; i < sz; ++i)
        for (std::int64_t j = i + 1; j < sz; ++j) {
            const double d = periodic_distance(g, i, j);
            acc += (u.values[i] - u.values[j]) * (v.values[i] - v.values[j]) *
                   std::pow(d, -(g.dim + 2.0 * s));
        }
    return c * w2 * acc;
}

} // namespace fgs
