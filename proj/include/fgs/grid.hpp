#ifndef FGS_GRID_HPP
#define FGS_GRID_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>

namespace fgs {

using Array = Eigen::ArrayXd;
using CArray = Eigen::ArrayXcd;

/// Uniform periodic box [-L, L)^N with the Fourier wavenumber lattice
/// k_j = pi j / L, j in {-n/2, ..., n/2-1} per axis.
struct Grid {
    int dim = 1;          // N in {1,2,3}
    double half_width = 0; // L
    int n = 0;            // points per axis, even

    double spacing() const { return 2.0 * half_width / n; }
    std::int64_t size() const {
        std::int64_t s = 1;
        for (int d = 0; d < dim; ++d) s *= n;
        return s;
    }
    double cell_volume() const {
        double v = 1.0;
        for (int d = 0; d < dim; ++d) v *= spacing();
        return v;
    }
    /// Coordinate of index i along one axis, i in [0, n).
    double coord(int i) const { return -half_width + i * spacing(); }
    /// Wavenumber of FFT index j along one axis (index 0 is exactly 0).
    double wavenumber(int j) const {
        int jj = (j < n / 2) ? j : j - n;
        return M_PI * jj / half_width;
    }
    /// Decompose a flat row-major index into per-axis indices.
    void unflatten(std::int64_t idx, int* out) const {
        for (int d = dim - 1; d >= 0; --d) {
            out[d] = static_cast<int>(idx % n);
            idx /= n;
        }
    }
    std::int64_t flatten(const int* ix) const {
        std::int64_t idx = 0;
        for (int d = 0; d < dim; ++d) idx = idx * n + ix[d];
        return idx;
    }

    bool operator==(const Grid& o) const {
        return dim == o.dim && half_width == o.half_width && n == o.n;
    }
};

Grid make_grid(int N, double L, int n);

/// Real scalar field sampled on a Grid; values in row-major axis order.
struct Field {
    Grid grid;
    Array values;

    Field() = default;
    Field(const Grid& g) : grid(g), values(Array::Zero(g.size())) {}
    Field(const Grid& g, Array v) : grid(g), values(std::move(v)) {
        if (values.size() != g.size())
            throw std::invalid_argument("Field: value count does not match grid");
    }

    double l2_norm() const { return std::sqrt(grid.cell_volume() * values.square().sum()); }
    double integral() const { return grid.cell_volume() * values.sum(); }
};

inline void require_same_grid(const Field& a, const Field& b) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("grid mismatch");
}

/// Relative L2 distance between two fields on the same grid.
inline double rel_l2_distance(const Field& a, const Field& b) {
    require_same_grid(a, b);
    double na = a.values.matrix().norm();
    double d = (a.values - b.values).matrix().norm();
    return na > 0 ? d / na : d;
}

} // namespace fgs

#endif
