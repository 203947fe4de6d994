#include "fgs/grid.hpp"

namespace fgs {

Grid make_grid(int N, double L, int n) {
    if (N < 1 || N > 3) throw std::invalid_argument("make_grid: N must be in {1,2,3}");
    if (L <= 0) throw std::invalid_argument("make_grid: L must be positive");
    if (n < 8) throw std::invalid_argument("make_grid: n must be >= 8");
    if (n % 2 != 0) throw std::invalid_argument("make_grid: n must be even");
    Grid g;
    g.dim = N;
    g.half_width = L;
    g.n = n;
    return g;
}

} // namespace fgs
