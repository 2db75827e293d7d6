#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

// Data-parallel inner loops of the toolkit. The default entry points are
// OpenMP-parallel; rbmo::kernels::serial keeps straightforward reference
// implementations for parity tests and the benchmark target.
//
// Reductions accumulate fixed-size blocks in index order and combine the
// per-block partials in block order, so the result does not depend on the
// thread count.

namespace rbmo::kernels {

inline constexpr std::size_t kBlock = 4096;

double sum(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);
/// sum of |v_i|^p * w_i (weight may be null for w == 1)
double power_sum(std::span<const double> v, const double* weight, double p);
double max_value(std::span<const double> v);
double min_value(std::span<const double> v);
double max_abs(std::span<const double> v);

/// Per-cube sums of `values` at a dyadic level: cubes in lexicographic
/// order, each cube's points accumulated in lexicographic order.
std::vector<double> cube_sums(std::span<const double> values, int dim, int points,
                              int level);

/// Per-cube sums of |values - cube_mean| at a level, given the cube means.
std::vector<double> cube_abs_dev_sums(std::span<const double> values, int dim,
                                      int points, int level,
                                      std::span<const double> cube_means);

/// out[i] = max over levels of level_means[l][cube containing point i].
void ancestor_max(std::span<const std::vector<double>> level_means, int dim,
                  int points, std::span<double> out);

/// Riemann sum of side/(side^2 + |center-y|_per^2)^((n+1)/2) over grid
/// points outside the cube of side expansion*side around center.
double phi_tail_sum(int dim, int points, double length,
                    const std::array<double, 3>& center, double side,
                    double expansion);

template <class F>
void map(std::span<const double> in, std::span<double> out, F f) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(in.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = f(in[i]);
}

template <class F>
void zip(std::span<const double> a, std::span<const double> b, std::span<double> out,
         F f) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = f(a[i], b[i]);
}

/// Applies a Fourier multiplier; f receives the integer wavevector
/// k in (-N/2, N/2]^dim of each bin and returns the complex factor.
template <class F>
void apply_multiplier(std::span<const std::complex<double>> in,
                      std::span<std::complex<double>> out, int dim, int points,
                      F f) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(in.size());
    const int half = points / 2;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        std::array<int, 3> k{0, 0, 0};
        std::size_t rest = static_cast<std::size_t>(i);
        for (int d = dim - 1; d >= 0; --d) {
            int bin = static_cast<int>(rest % points);
            rest /= points;
            k[d] = bin <= half ? bin : bin - points;
        }
        out[i] = f(k) * in[i];
    }
}

namespace serial {

double sum(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);
double power_sum(std::span<const double> v, const double* weight, double p);
double max_value(std::span<const double> v);
double min_value(std::span<const double> v);
double max_abs(std::span<const double> v);
std::vector<double> cube_sums(std::span<const double> values, int dim, int points,
                              int level);
std::vector<double> cube_abs_dev_sums(std::span<const double> values, int dim,
                                      int points, int level,
                                      std::span<const double> cube_means);
void ancestor_max(std::span<const std::vector<double>> level_means, int dim,
                  int points, std::span<double> out);
double phi_tail_sum(int dim, int points, double length,
                    const std::array<double, 3>& center, double side,
                    double expansion);

} // namespace serial

} // namespace rbmo::kernels
