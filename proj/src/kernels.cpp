#include "rbmo/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace rbmo::kernels {

namespace {

// decompose a flat row-major point index into per-axis indices
inline void unflatten(std::size_t i, int dim, int points, std::array<int, 3>& k) {
    for (int d = dim - 1; d >= 0; --d) {
        k[d] = static_cast<int>(i % points);
        i /= points;
    }
}

template <class BlockFn>
double blocked_sum(std::size_t n, BlockFn block_value) {
    const std::size_t nblocks = (n + kBlock - 1) / kBlock;
    std::vector<double> partial(nblocks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
        const std::size_t hi = std::min(lo + kBlock, n);
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += block_value(i);
        partial[static_cast<std::size_t>(b)] = acc;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

template <class Cmp>
double blocked_extreme(std::span<const double> v, double init, Cmp better) {
    const std::size_t n = v.size();
    const std::size_t nblocks = (n + kBlock - 1) / kBlock;
    std::vector<double> partial(nblocks, init);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
        const std::size_t hi = std::min(lo + kBlock, n);
        double acc = init;
        for (std::size_t i = lo; i < hi; ++i)
            if (better(v[i], acc)) acc = v[i];
        partial[static_cast<std::size_t>(b)] = acc;
    }
    double res = init;
    for (double p : partial)
        if (better(p, res)) res = p;
    return res;
}

inline double pow_term(double x, double p) {
    if (p == 1.0) return std::fabs(x);
    if (p == 2.0) return x * x;
    return std::pow(std::fabs(x), p);
}

struct CubeGeometry {
    int dim;
    int points;
    int level;
    int cubes_per_axis;  // 2^level
    int cells_per_axis;  // points >> level
    std::size_t cube_count;
    std::size_t points_per_cube;

    CubeGeometry(int dim_, int points_, int level_)
        : dim(dim_), points(points_), level(level_) {
        cubes_per_axis = 1 << level;
        cells_per_axis = points >> level;
        cube_count = 1;
        points_per_cube = 1;
        for (int d = 0; d < dim; ++d) {
            cube_count *= static_cast<std::size_t>(cubes_per_axis);
            points_per_cube *= static_cast<std::size_t>(cells_per_axis);
        }
    }

    // iterate the cube's grid points in lexicographic order
    template <class Fn>
    void for_each_point(std::size_t cube_flat, Fn fn) const {
        std::array<int, 3> c{0, 0, 0};
        std::size_t rest = cube_flat;
        for (int d = dim - 1; d >= 0; --d) {
            c[d] = static_cast<int>(rest % cubes_per_axis);
            rest /= cubes_per_axis;
        }
        const int S = cells_per_axis;
        std::array<int, 3> lo{0, 0, 0};
        for (int d = 0; d < dim; ++d) lo[d] = c[d] * S;
        if (dim == 1) {
            std::size_t base = static_cast<std::size_t>(lo[0]);
            for (int i = 0; i < S; ++i) fn(base + i);
        } else if (dim == 2) {
            for (int i = 0; i < S; ++i) {
                std::size_t row = static_cast<std::size_t>(lo[0] + i) * points + lo[1];
                for (int j = 0; j < S; ++j) fn(row + j);
            }
        } else {
            for (int i = 0; i < S; ++i)
                for (int j = 0; j < S; ++j) {
                    std::size_t row =
                        (static_cast<std::size_t>(lo[0] + i) * points +
                         static_cast<std::size_t>(lo[1] + j)) *
                            points +
                        lo[2];
                    for (int m = 0; m < S; ++m) fn(row + m);
                }
        }
    }
};

inline double phi_kernel(double side, double dist2, int dim) {
    const double q = side * side + dist2;
    switch (dim) {
        case 1: return side / q;
        case 2: return side / (q * std::sqrt(q));
        default: return side / (q * q);
    }
}

inline double min_image(double delta, double length) {
    delta = std::fabs(delta);
    return delta > 0.5 * length ? length - delta : delta;
}

} // namespace

double sum(std::span<const double> v) {
    return blocked_sum(v.size(), [&](std::size_t i) { return v[i]; });
}

double dot(std::span<const double> a, std::span<const double> b) {
    return blocked_sum(a.size(), [&](std::size_t i) { return a[i] * b[i]; });
}

double power_sum(std::span<const double> v, const double* weight, double p) {
    if (weight == nullptr)
        return blocked_sum(v.size(), [&](std::size_t i) { return pow_term(v[i], p); });
    return blocked_sum(v.size(),
                       [&](std::size_t i) { return pow_term(v[i], p) * weight[i]; });
}

double max_value(std::span<const double> v) {
    return blocked_extreme(v, -std::numeric_limits<double>::infinity(),
                           [](double x, double y) { return x > y; });
}

double min_value(std::span<const double> v) {
    return blocked_extreme(v, std::numeric_limits<double>::infinity(),
                           [](double x, double y) { return x < y; });
}

double max_abs(std::span<const double> v) {
    const std::size_t n = v.size();
    const std::size_t nblocks = (n + kBlock - 1) / kBlock;
    std::vector<double> partial(nblocks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
        const std::size_t hi = std::min(lo + kBlock, n);
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc = std::max(acc, std::fabs(v[i]));
        partial[static_cast<std::size_t>(b)] = acc;
    }
    double res = 0.0;
    for (double p : partial) res = std::max(res, p);
    return res;
}

std::vector<double> cube_sums(std::span<const double> values, int dim, int points,
                              int level) {
    CubeGeometry g(dim, points, level);
    std::vector<double> sums(g.cube_count, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t q = 0; q < static_cast<std::ptrdiff_t>(g.cube_count); ++q) {
        double acc = 0.0;
        g.for_each_point(static_cast<std::size_t>(q),
                         [&](std::size_t i) { acc += values[i]; });
        sums[static_cast<std::size_t>(q)] = acc;
    }
    return sums;
}

std::vector<double> cube_abs_dev_sums(std::span<const double> values, int dim,
                                      int points, int level,
                                      std::span<const double> cube_means) {
    CubeGeometry g(dim, points, level);
    std::vector<double> sums(g.cube_count, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t q = 0; q < static_cast<std::ptrdiff_t>(g.cube_count); ++q) {
        const double m = cube_means[static_cast<std::size_t>(q)];
        double acc = 0.0;
        g.for_each_point(static_cast<std::size_t>(q),
                         [&](std::size_t i) { acc += std::fabs(values[i] - m); });
        sums[static_cast<std::size_t>(q)] = acc;
    }
    return sums;
}

void ancestor_max(std::span<const std::vector<double>> level_means, int dim,
                  int points, std::span<double> out) {
    const int max_level = static_cast<int>(level_means.size()) - 1;
    const int log2n = std::countr_zero(static_cast<unsigned>(points));
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        std::array<int, 3> k{0, 0, 0};
        unflatten(static_cast<std::size_t>(i), dim, points, k);
        double best = -std::numeric_limits<double>::infinity();
        for (int l = 0; l <= max_level; ++l) {
            const int shift = log2n - l;
            std::size_t c = 0;
            for (int d = 0; d < dim; ++d)
                c = c * (static_cast<std::size_t>(1) << l) +
                    static_cast<std::size_t>(k[d] >> shift);
            best = std::max(best, level_means[l][c]);
        }
        out[i] = best;
    }
}

double phi_tail_sum(int dim, int points, double length,
                    const std::array<double, 3>& center, double side,
                    double expansion) {
    if (expansion * side >= length) return 0.0;
    const double half_width = 0.5 * expansion * side;
    const double h = length / points;
    std::size_t n = 1;
    for (int d = 0; d < dim; ++d) n *= static_cast<std::size_t>(points);
    double cell = 1.0;
    for (int d = 0; d < dim; ++d) cell *= h;

    const double total = blocked_sum(n, [&](std::size_t i) {
        std::array<int, 3> k{0, 0, 0};
        unflatten(i, dim, points, k);
        bool inside = true;
        double dist2 = 0.0;
        for (int d = 0; d < dim; ++d) {
            const double delta = min_image(k[d] * h - center[d], length);
            if (delta >= half_width) inside = false;
            dist2 += delta * delta;
        }
        if (inside) return 0.0;
        return phi_kernel(side, dist2, dim);
    });
    return total * cell;
}

namespace serial {

double sum(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double power_sum(std::span<const double> v, const double* weight, double p) {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        acc += pow_term(v[i], p) * (weight ? weight[i] : 1.0);
    return acc;
}

double max_value(std::span<const double> v) {
    double res = -std::numeric_limits<double>::infinity();
    for (double x : v) res = std::max(res, x);
    return res;
}

double min_value(std::span<const double> v) {
    double res = std::numeric_limits<double>::infinity();
    for (double x : v) res = std::min(res, x);
    return res;
}

double max_abs(std::span<const double> v) {
    double res = 0.0;
    for (double x : v) res = std::max(res, std::fabs(x));
    return res;
}

std::vector<double> cube_sums(std::span<const double> values, int dim, int points,
                              int level) {
    CubeGeometry g(dim, points, level);
    std::vector<double> sums(g.cube_count, 0.0);
    for (std::size_t q = 0; q < g.cube_count; ++q) {
        double acc = 0.0;
        g.for_each_point(q, [&](std::size_t i) { acc += values[i]; });
        sums[q] = acc;
    }
    return sums;
}

std::vector<double> cube_abs_dev_sums(std::span<const double> values, int dim,
                                      int points, int level,
                                      std::span<const double> cube_means) {
    CubeGeometry g(dim, points, level);
    std::vector<double> sums(g.cube_count, 0.0);
    for (std::size_t q = 0; q < g.cube_count; ++q) {
        double acc = 0.0;
        g.for_each_point(q,
                         [&](std::size_t i) { acc += std::fabs(values[i] - cube_means[q]); });
        sums[q] = acc;
    }
    return sums;
}

void ancestor_max(std::span<const std::vector<double>> level_means, int dim,
                  int points, std::span<double> out) {
    const int max_level = static_cast<int>(level_means.size()) - 1;
    const int log2n = std::countr_zero(static_cast<unsigned>(points));
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::array<int, 3> k{0, 0, 0};
        unflatten(i, dim, points, k);
        double best = -std::numeric_limits<double>::infinity();
        for (int l = 0; l <= max_level; ++l) {
            const int shift = log2n - l;
            std::size_t c = 0;
            for (int d = 0; d < dim; ++d)
                c = c * (static_cast<std::size_t>(1) << l) +
                    static_cast<std::size_t>(k[d] >> shift);
            best = std::max(best, level_means[l][c]);
        }
        out[i] = best;
    }
}

double phi_tail_sum(int dim, int points, double length,
                    const std::array<double, 3>& center, double side,
                    double expansion) {
    if (expansion * side >= length) return 0.0;
    const double half_width = 0.5 * expansion * side;
    const double h = length / points;
    std::size_t n = 1;
    double cell = 1.0;
    for (int d = 0; d < dim; ++d) {
        n *= static_cast<std::size_t>(points);
        cell *= h;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::array<int, 3> k{0, 0, 0};
        unflatten(i, dim, points, k);
        bool inside = true;
        double dist2 = 0.0;
        for (int d = 0; d < dim; ++d) {
            const double delta = min_image(k[d] * h - center[d], length);
            if (delta >= half_width) inside = false;
            dist2 += delta * delta;
        }
        if (!inside) acc += phi_kernel(side, dist2, dim);
    }
    return acc * cell;
}

} // namespace serial

} // namespace rbmo::kernels
