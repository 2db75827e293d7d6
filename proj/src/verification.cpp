#include "rbmo/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rbmo/kernels.hpp"
#include "rbmo/transforms.hpp"

namespace rbmo {

namespace {

double stein_threshold(int dim) { return (dim - 1.0) / dim; }

void record_worst_point(VerificationReport& report, const ScalarField& ref,
                        std::size_t idx) {
    report.worst["flat_index"] = static_cast<double>(idx);
    const auto x = ref.point(idx);
    for (int d = 0; d < ref.spec.dim; ++d)
        report.worst["x" + std::to_string(d)] = x[d];
}

} // namespace

VerificationReport check_majorization(const ScalarField& f, double eps, double t0,
                                      std::span<const double> t_list, double tol) {
    if (!(eps > stein_threshold(f.spec.dim)))
        throw std::invalid_argument("majorization needs eps > (n-1)/n");
    if (!(t0 > 0.0)) throw std::invalid_argument("t0 must be positive");
    for (double t : t_list)
        if (!(t > 0.0)) throw std::invalid_argument("heights must be positive");

    VerificationReport report;
    report.check = "majorization";
    report.tolerances["residual_rel"] = tol;

    const ScalarField base = system_magnitude_power(conjugate_system(f, t0), eps);

    double worst = -std::numeric_limits<double>::infinity();
    for (double t : t_list) {
        const ScalarField lhs =
            system_magnitude_power(conjugate_system(f, t0 + t), eps);
        const ScalarField rhs = poisson_extend(base, t);
        const double scale = kernels::max_abs(rhs.values);

        double residual = -std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t i = 0; i < lhs.size(); ++i) {
            const double r = lhs.values[i] - rhs.values[i];
            if (r > residual) {
                residual = r;
                arg = i;
            }
        }
        residual /= scale;
        report.profiles["residual_per_t"][t] = residual;
        if (residual > worst) {
            worst = residual;
            record_worst_point(report, f, arg);
            report.worst["t"] = t;
        }
    }
    report.constants["max_residual"] = worst;
    report.constants["eps"] = eps;
    report.constants["t0"] = t0;
    report.pass = worst <= tol;
    return report;
}

VerificationReport check_subharmonicity(const ScalarField& f, double eps,
                                        std::span<const double> heights, double h,
                                        double tol) {
    if (heights.size() < 3)
        throw std::invalid_argument("subharmonicity needs at least 3 heights");
    if (!(h > 0.0)) throw std::invalid_argument("height step must be positive");
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    for (std::size_t i = 0; i < heights.size(); ++i) {
        if (!(heights[i] > 0.0))
            throw std::invalid_argument("heights must be strictly positive");
        if (i > 0 && std::fabs(heights[i] - heights[i - 1] - h) > 1e-9 * h)
            throw std::invalid_argument("heights must be uniformly spaced by h");
    }

    VerificationReport report;
    report.check = "subharmonicity";

    std::vector<ScalarField> u;
    u.reserve(heights.size());
    double umax = 0.0;
    for (double t : heights) {
        u.push_back(system_magnitude_power(conjugate_system(f, t), eps));
        umax = std::max(umax, kernels::max_abs(u.back().values));
    }

    const double inv_h2 = 1.0 / (h * h);
    double min_lap = std::numeric_limits<double>::infinity();
    std::size_t worst_point = 0;
    double worst_height = heights[1];

    for (std::size_t s = 1; s + 1 < u.size(); ++s) {
        const ScalarField lap_x = laplacian(u[s]);
        for (std::size_t i = 0; i < lap_x.size(); ++i) {
            const double ddt =
                (u[s + 1].values[i] - 2.0 * u[s].values[i] + u[s - 1].values[i]) *
                inv_h2;
            const double lap = lap_x.values[i] + ddt;
            if (lap < min_lap) {
                min_lap = lap;
                worst_point = i;
                worst_height = heights[s];
            }
        }
    }

    const double scale = umax * inv_h2;
    report.constants["min_laplacian"] = min_lap;
    report.constants["scale"] = scale;
    report.constants["violation"] = std::max(0.0, -min_lap);
    report.constants["eps"] = eps;
    report.constants["h"] = h;
    report.tolerances["laplacian_rel"] = tol;
    record_worst_point(report, f, worst_point);
    report.worst["t"] = worst_height;
    report.pass = min_lap >= -tol * scale;
    return report;
}

VerificationReport check_key_inequality(const ScalarField& f, double q,
                                        std::span<const double> t_list) {
    if (!(q > 1.0)) throw std::invalid_argument("key inequality requires q > 1");
    if (kernels::min_value(f.values) <= 0.0)
        throw std::invalid_argument("key inequality input must be positive");
    if (t_list.empty()) throw std::invalid_argument("need at least one height");

    VerificationReport report;
    report.check = "key_inequality";
    report.tolerances["stability_spread"] = 1.5;

    const ScalarField f1 = pow(f, 1.0 / q);
    double c1 = 0.0;
    double spread_min = std::numeric_limits<double>::infinity();
    double spread_max = 0.0;
    for (double t : t_list) {
        if (!(t > 0.0)) throw std::invalid_argument("heights must be positive");
        const ScalarField num = poisson_extend(f, t); // P_t[f1^q], f1^q == f
        const ScalarField den = poisson_extend(f1, t);
        double per_t = 0.0;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < num.size(); ++i) {
            const double r = num.values[i] / std::pow(den.values[i], q);
            if (r > per_t) {
                per_t = r;
                arg = i;
            }
        }
        report.profiles["c1_per_t"][t] = per_t;
        if (per_t > c1) {
            c1 = per_t;
            record_worst_point(report, f, arg);
            report.worst["t"] = t;
        }
        spread_min = std::min(spread_min, per_t);
        spread_max = std::max(spread_max, per_t);
    }

    const double spread = spread_max / spread_min;
    report.constants["c1"] = c1;
    report.constants["spread_across_t"] = spread;
    report.constants["q"] = q;
    report.pass = std::isfinite(c1) && spread < 1.5;
    return report;
}

double phi_tail_norm(const GridSpec& s, const DyadicCube& cube, double expansion) {
    if (!(expansion >= 2.0))
        throw std::invalid_argument("expansion factor must be >= 2");
    if ((1 << cube.level) > s.points)
        throw std::invalid_argument("cube level exceeds grid resolution");
    return kernels::phi_tail_sum(s.dim, s.points, s.length, cube.center(s),
                                 cube.side(s), expansion);
}

VerificationReport check_sufficiency(const ScalarField& f, double rho,
                                     int rhi_min_level, int rhi_max_level) {
    if (!(rho > 0.0) || rho > 1.0)
        throw std::invalid_argument("sufficiency exponent must lie in (0,1]");
    if (kernels::min_value(f.values) <= 0.0)
        throw std::invalid_argument("sufficiency input must be positive");

    VerificationReport report;
    report.check = "sufficiency";
    report.tolerances["rhi_level_spread"] = 2.0;

    const ScalarField frho = pow(f, rho);

    double c = 0.0;
    std::size_t arg = 0;
    int worst_j = 1;
    for (int j = 1; j <= f.spec.dim; ++j) {
        const ScalarField rj = riesz(frho, j);
        for (std::size_t i = 0; i < rj.size(); ++i) {
            const double r = std::fabs(rj.values[i]) / frho.values[i];
            if (r > c) {
                c = r;
                arg = i;
                worst_j = j;
            }
        }
    }
    record_worst_point(report, f, arg);
    report.worst["j"] = worst_j;
    report.constants["c"] = c;

    const double eps = stein_threshold(f.spec.dim) + 0.1;
    const double q0 = 1.0 / eps;
    const int max_level = std::min(rhi_max_level, f.spec.max_level());
    const CubeSupremumReport rhi =
        reverse_holder_constant(pow(frho, eps), q0, rhi_min_level, max_level);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& [level, value] : rhi.per_level) {
        report.profiles["rhi_per_level"][level] = value;
        lo = std::min(lo, value);
        hi = std::max(hi, value);
    }
    const double spread = hi / lo;
    report.constants["rhi"] = rhi.value;
    report.constants["rhi_spread"] = spread;
    report.constants["q0"] = q0;

    const double bmo = bmo_norm(log(frho)).value;
    report.constants["bmo_log"] = bmo;

    report.pass = std::isfinite(c) && spread <= 2.0 && std::isfinite(bmo);
    return report;
}

VerificationReport roundtrip(const ScalarField& f, const BuildConfig& cfg) {
    VerificationReport report;
    report.check = "roundtrip";

    const ConstructionResult result = build_factorization(f, cfg);
    report.stages.push_back(certify_factorization(f, result));
    report.stages.push_back(check_sufficiency(result.g1));
    report.stages.back().check = "sufficiency_g1";
    report.stages.push_back(check_sufficiency(result.g2));
    report.stages.back().check = "sufficiency_g2";

    VerificationReport triangle;
    triangle.check = "bmo_triangle";
    const double bmo_f = bmo_norm(log(f)).value;
    const double bmo_g1 = bmo_norm(log(result.g1)).value;
    const double bmo_g2 = bmo_norm(log(result.g2)).value;
    const double bound =
        std::fabs(result.alpha) * (bmo_g1 + bmo_g2) * (1.0 + 1e-9);
    triangle.constants["bmo_log_f"] = bmo_f;
    triangle.constants["bmo_log_g1"] = bmo_g1;
    triangle.constants["bmo_log_g2"] = bmo_g2;
    triangle.constants["bound"] = bound;
    triangle.constants["alpha"] = result.alpha;
    triangle.tolerances["slack_rel"] = 1e-9;
    triangle.pass = bmo_f <= bound;
    report.stages.push_back(std::move(triangle));

    report.constants["alpha"] = result.alpha;
    report.constants["beta"] = result.beta;
    report.constants["K"] = result.K;
    report.pass = true;
    for (const VerificationReport& stage : report.stages) {
        report.constants["pass_" + stage.check] = stage.pass ? 1.0 : 0.0;
        report.pass = report.pass && stage.pass;
    }
    return report;
}

} // namespace rbmo
