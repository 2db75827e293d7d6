#include "rbmo/construction.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "rbmo/kernels.hpp"
#include "rbmo/transforms.hpp"

namespace rbmo {

namespace {

void axpy(ScalarField& acc, double a, const ScalarField& x) {
    kernels::zip(acc.values, x.values, acc.values,
                 [a](double s, double v) { return s + a * v; });
}

ScalarField random_probe(const GridSpec& s, std::mt19937_64& rng) {
    ScalarField out(s);
    for (double& x : out.values)
        x = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
    return out;
}

double weighted_l2(const ScalarField& g, const ScalarField* weight) {
    if (weight == nullptr) return norm(g, 2.0);
    return norm(g, 2.0, *weight);
}

/// max over x of |R_j g| / g for a positive g
double certificate_ratio(const ScalarField& g, int j) {
    const ScalarField rg = riesz(g, j);
    std::vector<double> ratio(g.size());
    kernels::zip(rg.values, g.values, ratio,
                 [](double r, double v) { return std::fabs(r) / v; });
    return kernels::max_value(ratio);
}

} // namespace

ScalarField apply_S(const ScalarField& g, const ScalarField& v) {
    if (!(g.spec == v.spec))
        throw std::invalid_argument("apply_S operands live on different grids");
    if (kernels::min_value(v.values) <= 0.0)
        throw std::domain_error("apply_S weight v must be positive");

    const ScalarField gv = mul(g, v);
    ScalarField out(g.spec, 0.0);
    for (int j = 1; j <= g.spec.dim; ++j) {
        const ScalarField rg = riesz(g, j);
        const ScalarField rgv = riesz(gv, j);
        const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (std::ptrdiff_t i = 0; i < n; ++i)
            out.values[i] +=
                std::fabs(rg.values[i]) + std::fabs(rgv.values[i]) / v.values[i];
    }
    return out;
}

OperatorNormEstimates estimate_operator_norms(const ScalarField& v, int probe_count,
                                              int iterations, double sigma,
                                              std::uint64_t seed) {
    if (probe_count < 4) throw std::invalid_argument("need at least 4 probes");
    if (iterations < 2) throw std::invalid_argument("need at least 2 iterations");
    if (!(sigma >= 1.0)) throw std::invalid_argument("safety factor must be >= 1");

    const GridSpec& s = v.spec;
    std::mt19937_64 rng(seed);
    std::vector<ScalarField> probes;
    probes.push_back(construction_f0(s));
    for (int p = 1; p < probe_count; ++p) probes.push_back(random_probe(s, rng));

    const ScalarField v2 = mul(v, v);
    const ScalarField* weights[3] = {nullptr, &v2, &v};
    double observed[3] = {0.0, 0.0, 0.0};

    for (int mode = 0; mode < 3; ++mode) {
        for (const ScalarField& probe : probes) {
            ScalarField g = probe;
            for (int it = 0; it < iterations; ++it) {
                const double ng = weighted_l2(g, weights[mode]);
                if (ng == 0.0) throw std::invalid_argument("probe with zero norm");
                const ScalarField sg = apply_S(g, v);
                const double nsg = weighted_l2(sg, weights[mode]);
                observed[mode] = std::max(observed[mode], nsg / ng);
                const double peak = kernels::max_abs(sg.values);
                if (peak == 0.0) break; // S annihilated the probe; iterating is moot
                g = scale(sg, 1.0 / peak);
            }
        }
    }

    OperatorNormEstimates est;
    est.observed_c0 = observed[0];
    est.observed_c1 = observed[1];
    est.observed_cv = observed[2];
    est.c0 = sigma * observed[0];
    est.c1 = sigma * observed[1];
    est.cv = sigma * observed[2];
    est.probes = probe_count;
    est.iterations = iterations;
    est.sigma = sigma;
    return est;
}

ScalarField construction_f0(const GridSpec& s) {
    std::array<double, 3> center = box_center(s);
    for (int d = 0; d < s.dim; ++d) center[d] += 0.5 * s.spacing();
    return ball_indicator_field(s, center, 0.25 * s.length, 0.0);
}

ConstructionResult build_factorization(const ScalarField& f, const BuildConfig& cfg) {
    if (kernels::min_value(f.values) <= 0.0)
        throw std::invalid_argument("factorization input must be positive");

    ConstructionResult result;
    AlphaDecomposition decomp = find_alpha(f, cfg.tau);
    result.alpha = decomp.alpha;
    result.v = std::move(decomp.v);

    const ScalarField inv_v = div(constant_field(f.spec, 1.0), result.v);
    result.a2_memberships["v"] = ap_characteristic(result.v, 2.0).value;
    result.a2_memberships["inv_v"] = ap_characteristic(inv_v, 2.0).value;
    result.a2_memberships["inv_v2"] = ap_characteristic(mul(inv_v, inv_v), 2.0).value;
    result.a2_memberships["v2"] = decomp.a2_of_v_squared;

    result.norms = estimate_operator_norms(result.v, cfg.probe_count, cfg.iterations,
                                           cfg.sigma, cfg.seed);
    result.beta = std::min({1.0 / (2.0 * result.norms.c0), 1.0 / (2.0 * result.norms.c1),
                            1.0 / (2.0 * result.norms.cv)});

    ScalarField fk = construction_f0(f.spec);
    ScalarField g2 = fk;
    double beta_k = 1.0;
    double prev_norm = norm(fk, 2.0);
    double tail = 1.0;
    int bad_steps = 0;
    int k = 0;
    while (k < cfg.k_max) {
        fk = apply_S(fk, result.v);
        beta_k *= result.beta;
        ++k;

        const double cur_norm = norm(fk, 2.0);
        if (result.beta * cur_norm >= prev_norm && prev_norm > 0.0) {
            if (++bad_steps >= 3)
                throw std::runtime_error(
                    "factorization series fails the ratio test; operator norms were "
                    "underestimated, rerun with a larger safety factor");
        } else {
            bad_steps = 0;
        }
        prev_norm = cur_norm;

        axpy(g2, beta_k, fk);
        tail = beta_k * cur_norm / norm(g2, 2.0);
        if (tail < cfg.tail_tol) break;
    }
    result.K = k;
    result.tail_bound = tail;

    if (kernels::min_value(g2.values) <= 0.0)
        throw std::runtime_error(
            "g2 vanishes at a grid point; the starting indicator does not propagate "
            "positivity on this grid");

    result.g1 = mul(result.v, g2);
    result.g2 = std::move(g2);

    for (int j = 1; j <= f.spec.dim; ++j) {
        result.certificate[0].push_back(certificate_ratio(result.g1, j));
        result.certificate[1].push_back(certificate_ratio(result.g2, j));
    }
    return result;
}

VerificationReport certify_factorization(const ScalarField& f,
                                         const ConstructionResult& result,
                                         double tol) {
    VerificationReport report;
    report.check = "certify_factorization";
    report.tolerances["recovery_rel"] = 1e-12;
    report.tolerances["certificate_rel"] = tol;

    const ScalarField recon = pow(div(result.g1, result.g2), result.alpha);
    const ScalarField err = sub(f, recon);
    const double recovery = kernels::max_abs(err.values) / kernels::max_abs(f.values);

    std::size_t worst_idx = 0;
    double worst_err = -1.0;
    for (std::size_t i = 0; i < err.size(); ++i)
        if (std::fabs(err.values[i]) > worst_err) {
            worst_err = std::fabs(err.values[i]);
            worst_idx = i;
        }
    const auto x = f.point(worst_idx);
    report.worst["flat_index"] = static_cast<double>(worst_idx);
    for (int d = 0; d < f.spec.dim; ++d)
        report.worst["x" + std::to_string(d)] = x[d];

    report.constants["recovery_error"] = recovery;
    report.constants["alpha"] = result.alpha;
    report.constants["beta"] = result.beta;
    const double cert_bound = (1.0 + tol) / result.beta;

    bool pass = recovery <= 1e-12;
    const char* names[2] = {"g1", "g2"};
    const ScalarField* fields[2] = {&result.g1, &result.g2};
    for (int i = 0; i < 2; ++i) {
        const double mn = kernels::min_value(fields[i]->values);
        const double l2 = norm(*fields[i], 2.0);
        report.constants[std::string("min_") + names[i]] = mn;
        report.constants[std::string("l2_") + names[i]] = l2;
        pass = pass && mn > 0.0 && std::isfinite(l2);
        for (int j = 1; j <= f.spec.dim; ++j) {
            const double ratio = certificate_ratio(*fields[i], j);
            report.constants["cert_" + std::string(names[i]) + "_j" +
                             std::to_string(j)] = ratio;
            pass = pass && ratio <= cert_bound;
        }
    }
    report.constants["certificate_bound"] = cert_bound;
    report.pass = pass;
    if (!pass && recovery > 1e-12)
        report.notes.push_back("f is not recovered by (g1/g2)^alpha at 1e-12");
    return report;
}

} // namespace rbmo
