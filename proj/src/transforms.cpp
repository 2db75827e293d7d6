#include "rbmo/transforms.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

#include "rbmo/kernels.hpp"

namespace rbmo {

namespace {

// FFTW's planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

void run_fft(const GridSpec& spec, std::vector<std::complex<double>>& data, int sign) {
    int dims[3] = {spec.points, spec.points, spec.points};
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft(spec.dim, dims, ptr, ptr, sign, FFTW_ESTIMATE);
    }
    if (plan == nullptr) throw std::runtime_error("FFTW plan creation failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
}

bool on_nyquist_line(const std::array<int, 3>& k, int dim, int points) {
    for (int d = 0; d < dim; ++d)
        if (k[d] == points / 2) return true;
    return false;
}

double wavevector_norm(const std::array<int, 3>& k, int dim) {
    double s = 0.0;
    for (int d = 0; d < dim; ++d) s += static_cast<double>(k[d]) * k[d];
    return std::sqrt(s);
}

template <class M>
ScalarField multiplier_op(const ScalarField& f, M m) {
    SpectralField c = analyze(f);
    kernels::apply_multiplier(
        std::span<const std::complex<double>>(c.coefficients),
        std::span<std::complex<double>>(c.coefficients), c.spec.dim, c.spec.points, m);
    return synthesize(c);
}

std::complex<double> riesz_factor(const std::array<int, 3>& k, int dim, int points,
                                  int axis) {
    if (on_nyquist_line(k, dim, points)) return {0.0, 0.0};
    const double norm = wavevector_norm(k, dim);
    if (norm == 0.0) return {0.0, 0.0};
    return {0.0, -static_cast<double>(k[axis]) / norm};
}

} // namespace

SpectralField analyze(const ScalarField& f) {
    SpectralField c;
    c.spec = f.spec;
    c.coefficients.resize(f.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(f.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) c.coefficients[i] = f.values[i];
    run_fft(c.spec, c.coefficients, FFTW_FORWARD);
    const double inv = 1.0 / static_cast<double>(f.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) c.coefficients[i] *= inv;
    return c;
}

ScalarField synthesize(const SpectralField& c) {
    if (c.coefficients.size() != c.spec.total())
        throw std::invalid_argument("spectral array does not match grid size");
    std::vector<std::complex<double>> work = c.coefficients;
    run_fft(c.spec, work, FFTW_BACKWARD);
    ScalarField f(c.spec);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(f.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) f.values[i] = work[i].real();
    return f;
}

ScalarField riesz(const ScalarField& f, int j) {
    const int dim = f.spec.dim;
    if (j < 1 || j > dim) throw std::invalid_argument("riesz component out of range");
    const int axis = j - 1;
    const int points = f.spec.points;
    return multiplier_op(f, [dim, points, axis](const std::array<int, 3>& k) {
        return riesz_factor(k, dim, points, axis);
    });
}

ScalarField hilbert_circle(const ScalarField& f) {
    if (f.spec.dim != 1)
        throw std::invalid_argument("hilbert_circle requires a 1-d grid");
    const int points = f.spec.points;
    return multiplier_op(f, [points](const std::array<int, 3>& k) {
        if (k[0] == 0 || k[0] == points / 2) return std::complex<double>{0.0, 0.0};
        return std::complex<double>{0.0, k[0] > 0 ? -1.0 : 1.0};
    });
}

ScalarField poisson_extend(const ScalarField& f, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("poisson height must be positive");
    const int dim = f.spec.dim;
    const double xi_unit = 2.0 * M_PI / f.spec.length;
    return multiplier_op(f, [dim, xi_unit, t](const std::array<int, 3>& k) {
        return std::complex<double>{std::exp(-t * xi_unit * wavevector_norm(k, dim)),
                                    0.0};
    });
}

ScalarField laplacian(const ScalarField& f) {
    const int dim = f.spec.dim;
    const double xi_unit = 2.0 * M_PI / f.spec.length;
    return multiplier_op(f, [dim, xi_unit](const std::array<int, 3>& k) {
        const double norm = xi_unit * wavevector_norm(k, dim);
        return std::complex<double>{-norm * norm, 0.0};
    });
}

ConjugateSystem conjugate_system(const ScalarField& f, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("conjugate system height must be positive");
    if (kernels::min_value(f.values) <= 0.0)
        throw std::invalid_argument("conjugate system needs a positive field");

    const SpectralField base = analyze(f);
    const int dim = f.spec.dim;
    const int points = f.spec.points;
    const double xi_unit = 2.0 * M_PI / f.spec.length;

    ConjugateSystem sys;
    sys.t = t;
    sys.components.reserve(dim + 1);

    SpectralField work;
    work.spec = base.spec;
    work.coefficients.resize(base.coefficients.size());

    kernels::apply_multiplier(
        std::span<const std::complex<double>>(base.coefficients),
        std::span<std::complex<double>>(work.coefficients), dim, points,
        [dim, xi_unit, t](const std::array<int, 3>& k) {
            return std::complex<double>{
                std::exp(-t * xi_unit * wavevector_norm(k, dim)), 0.0};
        });
    sys.components.push_back(synthesize(work));

    for (int axis = 0; axis < dim; ++axis) {
        kernels::apply_multiplier(
            std::span<const std::complex<double>>(base.coefficients),
            std::span<std::complex<double>>(work.coefficients), dim, points,
            [dim, points, xi_unit, t, axis](const std::array<int, 3>& k) {
                const double damp = std::exp(-t * xi_unit * wavevector_norm(k, dim));
                return damp * riesz_factor(k, dim, points, axis);
            });
        sys.components.push_back(synthesize(work));
    }
    return sys;
}

ScalarField system_magnitude_power(const ConjugateSystem& sys, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("magnitude power must be positive");
    if (sys.components.empty()) throw std::invalid_argument("empty conjugate system");
    const GridSpec& spec = sys.components.front().spec;
    ScalarField out(spec);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(spec.total());
    const std::size_t ncomp = sys.components.size();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t c = 0; c < ncomp; ++c) {
            const double v = sys.components[c].values[i];
            s += v * v;
        }
        out.values[i] = eps == 2.0 ? s : std::pow(s, 0.5 * eps);
    }
    return out;
}

ScalarField maximal_dyadic(const ScalarField& f) {
    const GridSpec& s = f.spec;
    ScalarField absf = abs(f);
    const int levels = s.max_level();

    std::vector<std::vector<double>> level_means(levels + 1);
    for (int l = 0; l <= levels; ++l) {
        std::vector<double> sums = kernels::cube_sums(absf.values, s.dim, s.points, l);
        double pts = 1.0;
        for (int d = 0; d < s.dim; ++d) pts *= static_cast<double>(s.points >> l);
        for (double& x : sums) x /= pts;
        level_means[l] = std::move(sums);
    }

    ScalarField out(s);
    kernels::ancestor_max(level_means, s.dim, s.points, out.values);
    return out;
}

} // namespace rbmo
