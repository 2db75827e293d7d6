#include "rbmo/bmo_weights.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rbmo/kernels.hpp"

namespace rbmo {

namespace {

void check_levels(const GridSpec& s, int min_level, int max_level) {
    if (min_level < 0 || min_level > max_level)
        throw std::invalid_argument("invalid dyadic level range");
    if ((1 << max_level) > s.points)
        throw std::invalid_argument("dyadic level exceeds grid resolution");
}

void require_positive(const ScalarField& f, const char* what) {
    if (kernels::min_value(f.values) <= 0.0)
        throw std::invalid_argument(std::string(what) + " must be positive");
}

DyadicCube cube_at(const GridSpec& s, int level, std::size_t flat) {
    DyadicCube q;
    q.level = level;
    const int c = 1 << level;
    for (int d = s.dim - 1; d >= 0; --d) {
        q.index[d] = static_cast<int>(flat % c);
        flat /= c;
    }
    return q;
}

double points_per_cube(const GridSpec& s, int level) {
    double pts = 1.0;
    for (int d = 0; d < s.dim; ++d) pts *= static_cast<double>(s.points >> level);
    return pts;
}

/// Runs a per-level scan: `per_cube(level) -> vector of cube values`,
/// keeps the per-level maxima and the first cube attaining the global max.
template <class PerCube>
CubeSupremumReport scan(const GridSpec& s, int min_level, int max_level,
                        PerCube per_cube) {
    CubeSupremumReport report;
    report.min_level = min_level;
    report.max_level = max_level;
    bool first = true;
    for (int l = min_level; l <= max_level; ++l) {
        const std::vector<double> values = per_cube(l);
        double level_max = values.front();
        std::size_t level_arg = 0;
        for (std::size_t q = 1; q < values.size(); ++q)
            if (values[q] > level_max) {
                level_max = values[q];
                level_arg = q;
            }
        report.per_level[l] = level_max;
        if (first || level_max > report.value) {
            report.value = level_max;
            report.worst_cube = cube_at(s, l, level_arg);
            first = false;
        }
    }
    return report;
}

} // namespace

CubeSupremumReport bmo_norm(const ScalarField& u) {
    return bmo_norm(u, 0, u.spec.max_level());
}

CubeSupremumReport bmo_norm(const ScalarField& u, int min_level, int max_level) {
    check_levels(u.spec, min_level, max_level);
    const GridSpec& s = u.spec;
    return scan(s, min_level, max_level, [&](int l) {
        const double pts = points_per_cube(s, l);
        std::vector<double> means = kernels::cube_sums(u.values, s.dim, s.points, l);
        for (double& x : means) x /= pts;
        std::vector<double> dev =
            kernels::cube_abs_dev_sums(u.values, s.dim, s.points, l, means);
        for (double& x : dev) x /= pts;
        return dev;
    });
}

CubeSupremumReport ap_characteristic(const ScalarField& w, double p) {
    return ap_characteristic(w, p, 0, w.spec.max_level());
}

CubeSupremumReport ap_characteristic(const ScalarField& w, double p, int min_level,
                                     int max_level) {
    if (!(p > 1.0)) throw std::invalid_argument("A_p requires p > 1");
    require_positive(w, "A_p weight");
    check_levels(w.spec, min_level, max_level);
    const GridSpec& s = w.spec;
    const ScalarField dual = pow(w, -1.0 / (p - 1.0));
    return scan(s, min_level, max_level, [&](int l) {
        const double pts = points_per_cube(s, l);
        std::vector<double> mw = kernels::cube_sums(w.values, s.dim, s.points, l);
        std::vector<double> md = kernels::cube_sums(dual.values, s.dim, s.points, l);
        std::vector<double> out(mw.size());
        for (std::size_t q = 0; q < mw.size(); ++q)
            out[q] = (mw[q] / pts) * std::pow(md[q] / pts, p - 1.0);
        return out;
    });
}

CubeSupremumReport reverse_holder_constant(const ScalarField& f1, double q) {
    return reverse_holder_constant(f1, q, 0, f1.spec.max_level());
}

CubeSupremumReport reverse_holder_constant(const ScalarField& f1, double q,
                                           int min_level, int max_level) {
    if (!(q > 1.0)) throw std::invalid_argument("reverse Hoelder requires q > 1");
    require_positive(f1, "reverse Hoelder input");
    check_levels(f1.spec, min_level, max_level);
    const GridSpec& s = f1.spec;
    const ScalarField fq = pow(f1, q);
    return scan(s, min_level, max_level, [&](int l) {
        const double pts = points_per_cube(s, l);
        std::vector<double> mq = kernels::cube_sums(fq.values, s.dim, s.points, l);
        std::vector<double> mf = kernels::cube_sums(f1.values, s.dim, s.points, l);
        std::vector<double> out(mq.size());
        for (std::size_t i = 0; i < mq.size(); ++i)
            out[i] = (mq[i] / pts) / std::pow(mf[i] / pts, q);
        return out;
    });
}

AlphaDecomposition find_alpha(const ScalarField& f, double tau) {
    if (!(tau > 1.0)) throw std::invalid_argument("A2 threshold must exceed 1");
    require_positive(f, "find_alpha input");

    double last = 0.0;
    for (double alpha = 1.0; alpha <= 65536.0; alpha *= 2.0) {
        ScalarField v = pow(f, 1.0 / alpha);
        const CubeSupremumReport a2 = ap_characteristic(mul(v, v), 2.0);
        last = a2.value;
        if (a2.value <= tau) {
            AlphaDecomposition d;
            d.alpha = alpha;
            d.v = std::move(v);
            d.a2_of_v_squared = a2.value;
            d.threshold = tau;
            return d;
        }
    }
    throw std::runtime_error(
        "find_alpha: no alpha <= 2^16 brings [v^2]_A2 under " + std::to_string(tau) +
        " (last measured " + std::to_string(last) +
        "); the field is too rough for this grid/threshold");
}

} // namespace rbmo
