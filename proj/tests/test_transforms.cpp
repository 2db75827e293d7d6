#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <future>

#include "oracles.hpp"
#include "rbmo/grid.hpp"
#include "rbmo/transforms.hpp"

using namespace rbmo;

namespace {

const double kTwoPi = 2.0 * M_PI;

double rel_linf(const std::vector<double>& a, const std::vector<double>& b) {
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff = std::max(diff, std::fabs(a[i] - b[i]));
        scale = std::max(scale, std::fabs(b[i]));
    }
    return scale > 0.0 ? diff / scale : diff;
}

double rel_l2(const ScalarField& a, const ScalarField& b) {
    const double d = norm(sub(a, b), 2.0);
    const double s = norm(b, 2.0);
    return s > 0.0 ? d / s : d;
}

// inner product in the quadrature sense
double inner(const ScalarField& a, const ScalarField& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a.values[i] * b.values[i];
    return acc * a.spec.cell_volume();
}

// band-limited analytic test function for the n = 1 kernel oracles
struct TrigPoly {
    double L;
    double operator()(double x) const {
        const double w = kTwoPi / L;
        return 1.0 + 0.7 * std::cos(w * x + 0.3) + 0.4 * std::sin(3.0 * w * x) -
               0.2 * std::cos(5.0 * w * x - 1.1);
    }
};

ScalarField sample(const GridSpec& s, const std::function<double(double)>& f) {
    ScalarField out(s);
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = f(out.point(i)[0]);
    return out;
}

} // namespace

TEST_CASE("analyze picks out single modes") {
    const GridSpec s = make_grid(2, 16, kTwoPi);
    const SpectralField c = analyze(constant_field(s, 3.5));
    CHECK(c.coefficients[0].real() == doctest::Approx(3.5).epsilon(1e-14));
    for (std::size_t i = 1; i < c.coefficients.size(); ++i)
        CHECK(std::abs(c.coefficients[i]) < 1e-13);

    const SpectralField cc = analyze(single_mode_field(s, {1, 0, 0}, 1.0, 0.0));
    // bins (1,0) and (N-1,0) carry 1/2 each
    CHECK(std::abs(cc.coefficients[16] - std::complex<double>(0.5, 0.0)) < 1e-13);
    CHECK(std::abs(cc.coefficients[15 * 16] - std::complex<double>(0.5, 0.0)) < 1e-13);
}

TEST_CASE("synthesize matches direct trigonometric evaluation") {
    const GridSpec s = make_grid(1, 32, 2.0);
    SpectralField c;
    c.spec = s;
    c.coefficients.assign(32, {0.0, 0.0});
    c.coefficients[0] = {0.8, 0.0};
    c.coefficients[2] = {0.3, -0.1};
    c.coefficients[30] = std::conj(c.coefficients[2]); // k = -2 partner
    const ScalarField f = synthesize(c);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double x = f.point(i)[0];
        const double expected =
            0.8 + 2.0 * (0.3 * std::cos(2.0 * kTwoPi * x / 2.0) +
                         0.1 * std::sin(2.0 * kTwoPi * x / 2.0));
        CHECK(f.values[i] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("analyze/synthesize round trip") {
    for (int dim : {1, 2}) {
        const GridSpec s = make_grid(dim, 32, 1.7);
        const ScalarField f = testing::random_values_field(s, 7 + dim);
        CHECK(rel_l2(synthesize(analyze(f)), f) < 1e-12);
    }
}

TEST_CASE("Parseval under the stated normalization") {
    const GridSpec s = make_grid(2, 32, 1.3);
    const ScalarField f = testing::random_values_field(s, 99);
    const SpectralField c = analyze(f);
    double sum2 = 0.0;
    for (const auto& z : c.coefficients) sum2 += std::norm(z);
    const double volume = std::pow(s.length, s.dim);
    CHECK(norm(f, 2.0) == doctest::Approx(std::sqrt(volume * sum2)).epsilon(1e-12));
}

TEST_CASE("riesz on single modes") {
    const GridSpec s = make_grid(2, 32, kTwoPi);

    const ScalarField z = riesz(constant_field(s, 2.0), 1);
    CHECK(rbmo::max_abs(z) < 1e-14);

    // R_1 cos(x1) = sin(x1), R_2 cos(x1) = 0
    const ScalarField c1 = single_mode_field(s, {1, 0, 0}, 1.0, 0.0);
    const ScalarField r1 = riesz(c1, 1);
    for (std::size_t i = 0; i < r1.size(); ++i)
        CHECK(r1.values[i] == doctest::Approx(std::sin(r1.point(i)[0])).epsilon(1e-12));
    CHECK(rbmo::max_abs(riesz(c1, 2)) < 1e-13);

    // R_1 cos(x1+x2) = (1/sqrt 2) sin(x1+x2)
    const ScalarField cd = single_mode_field(s, {1, 1, 0}, 1.0, 0.0);
    const ScalarField rd = riesz(cd, 1);
    for (std::size_t i = 0; i < rd.size(); ++i) {
        const auto x = rd.point(i);
        CHECK(rd.values[i] ==
              doctest::Approx(std::sin(x[0] + x[1]) / std::sqrt(2.0)).epsilon(1e-12));
    }

    CHECK_THROWS_AS(riesz(c1, 0), std::invalid_argument);
    CHECK_THROWS_AS(riesz(c1, 3), std::invalid_argument);
}

TEST_CASE("hilbert transform on the circle") {
    const GridSpec s = make_grid(1, 64, kTwoPi);
    for (int k : {1, 2, 5}) {
        const ScalarField c = single_mode_field(s, {k, 0, 0}, 1.0, 0.0);
        const ScalarField h = hilbert_circle(c);
        for (std::size_t i = 0; i < h.size(); ++i)
            CHECK(h.values[i] ==
                  doctest::Approx(std::sin(k * h.point(i)[0])).epsilon(1e-11));
    }
    CHECK(rbmo::max_abs(hilbert_circle(constant_field(s, 4.0))) < 1e-14);

    // H(H f) = -(f - mean f)
    const ScalarField f = testing::random_band_limited_field(s, 21);
    const ScalarField hh = hilbert_circle(hilbert_circle(f));
    const ScalarField expected = scale(sub(f, constant_field(s, mean(f))), -1.0);
    CHECK(rel_l2(hh, expected) < 1e-12);

    CHECK_THROWS_AS(hilbert_circle(constant_field(make_grid(2, 16, 1.0), 1.0)),
                    std::invalid_argument);

    // n = 1 Riesz transform and the circle Hilbert transform coincide
    CHECK(rel_l2(riesz(f, 1), hilbert_circle(f)) < 1e-13);
}

TEST_CASE("poisson extension basics") {
    const GridSpec s = make_grid(2, 32, kTwoPi);
    const ScalarField c = poisson_extend(constant_field(s, 2.5), 0.7);
    for (double x : c.values) CHECK(x == doctest::Approx(2.5).epsilon(1e-13));

    const ScalarField m = single_mode_field(s, {1, 0, 0}, 1.0, 0.0);
    const ScalarField pm = poisson_extend(m, 1.0);
    for (std::size_t i = 0; i < pm.size(); ++i)
        CHECK(pm.values[i] ==
              doctest::Approx(std::exp(-1.0) * std::cos(pm.point(i)[0])).epsilon(1e-12));

    CHECK_THROWS_AS(poisson_extend(m, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(poisson_extend(m, -1.0), std::invalid_argument);
}

TEST_CASE("poisson semigroup, positivity, and L-infinity contraction") {
    const GridSpec s = make_grid(2, 64, 1.0);
    const ScalarField f = testing::random_values_field(s, 55);

    const ScalarField ab = poisson_extend(poisson_extend(f, 0.03), 0.05);
    const ScalarField once = poisson_extend(f, 0.08);
    CHECK(rel_l2(ab, once) < 1e-10);

    const ScalarField pos = rbmo::exp(f);
    const ScalarField ppos = poisson_extend(pos, 0.1);
    CHECK(rbmo::min_value(ppos) > -1e-12 * rbmo::max_abs(pos));
    CHECK(rbmo::max_abs(poisson_extend(f, 0.1)) <= rbmo::max_abs(f) + 1e-12);
}

TEST_CASE("riesz multiplier identities") {
    for (int dim : {1, 2}) {
        const GridSpec s = make_grid(dim, 32, 2.2);
        const ScalarField f = testing::random_band_limited_field(s, 63 + dim);

        ScalarField acc(s, 0.0);
        for (int j = 1; j <= dim; ++j) acc = add(acc, riesz(riesz(f, j), j));
        const ScalarField expected = scale(sub(f, constant_field(s, mean(f))), -1.0);
        CHECK(rel_l2(acc, expected) < 1e-10);
    }
}

TEST_CASE("riesz is anti-self-adjoint") {
    const GridSpec s = make_grid(2, 32, 1.0);
    ScalarField f = testing::random_values_field(s, 71);
    ScalarField g = testing::random_values_field(s, 72);
    f = sub(f, constant_field(s, mean(f)));
    g = sub(g, constant_field(s, mean(g)));
    for (int j = 1; j <= 2; ++j) {
        const double lhs = inner(riesz(f, j), g);
        const double rhs = -inner(f, riesz(g, j));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("multiplier operators agree with periodized-kernel quadrature") {
    // dense O(N * M) oracle at n = 1, N = 32
    const GridSpec s = make_grid(1, 32, 2.0);
    const TrigPoly ffun{s.length};
    const ScalarField f = sample(s, ffun);

    const std::vector<double> h_oracle = testing::quadrature_hilbert(s, ffun);
    CHECK(rel_linf(hilbert_circle(f).values, h_oracle) < 1e-6);
    CHECK(rel_linf(riesz(f, 1).values, h_oracle) < 1e-6);

    for (double t : {0.05 * s.length, 0.2 * s.length}) {
        const std::vector<double> p_oracle = testing::quadrature_poisson(s, ffun, t);
        CHECK(rel_linf(poisson_extend(f, t).values, p_oracle) < 1e-6);
    }
}

TEST_CASE("conjugate system") {
    const GridSpec s = make_grid(1, 64, kTwoPi);

    const ConjugateSystem cs = conjugate_system(constant_field(s, 1.0), 0.5);
    REQUIRE(cs.components.size() == 2);
    for (double x : cs.components[0].values) CHECK(x == doctest::Approx(1.0));
    CHECK(rbmo::max_abs(cs.components[1]) < 1e-14);

    // f = 1 + cos(x)/2 at t = 1: (1 + e^-1 cos(x)/2, e^-1 sin(x)/2)
    ScalarField f = add(constant_field(s, 1.0),
                        scale(single_mode_field(s, {1, 0, 0}, 1.0, 0.0), 0.5));
    const ConjugateSystem sys = conjugate_system(f, 1.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double x = f.point(i)[0];
        CHECK(sys.components[0].values[i] ==
              doctest::Approx(1.0 + 0.5 * std::exp(-1.0) * std::cos(x)).epsilon(1e-12));
        CHECK(sys.components[1].values[i] ==
              doctest::Approx(0.5 * std::exp(-1.0) * std::sin(x)).epsilon(1e-12));
    }

    CHECK_THROWS_AS(conjugate_system(f, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(conjugate_system(scale(f, -1.0), 1.0), std::invalid_argument);
}

TEST_CASE("conjugate system component 0 converges to f as t -> 0") {
    const GridSpec s = make_grid(1, 32, 1.0);
    const TrigPoly ffun{s.length};
    const ScalarField f = sample(s, ffun);

    double err_prev = 0.0;
    int step = 0;
    for (double t : {s.length / 32.0, s.length / 64.0}) {
        const ConjugateSystem sys = conjugate_system(f, t);
        // spectral evaluation must match the periodized-kernel oracle
        const std::vector<double> oracle = testing::quadrature_poisson(s, ffun, t);
        CHECK(rel_linf(sys.components[0].values, oracle) < 1e-6);

        const double err = rel_l2(sys.components[0], f);
        if (step++ > 0) CHECK(err < err_prev);
        err_prev = err;
    }
}

TEST_CASE("system magnitude power") {
    const GridSpec s = make_grid(1, 16, 1.0);
    ConjugateSystem sys;
    sys.t = 1.0;
    sys.components = {constant_field(s, 3.0), constant_field(s, 4.0)};

    const ScalarField m1 = system_magnitude_power(sys, 1.0);
    for (double x : m1.values) CHECK(x == doctest::Approx(5.0).epsilon(1e-14));

    const ScalarField m2 = system_magnitude_power(sys, 2.0);
    for (double x : m2.values) CHECK(x == doctest::Approx(25.0).epsilon(1e-14));

    sys.components = {constant_field(s, 1.0), constant_field(s, 0.0)};
    for (double eps : {0.3, 0.7, 1.9}) {
        const ScalarField m = system_magnitude_power(sys, eps);
        for (double x : m.values) CHECK(x == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("transforms are safe to invoke concurrently") {
    const GridSpec s = make_grid(2, 64, 1.0);
    const ScalarField f = testing::random_band_limited_field(s, 303);
    const ScalarField r1 = riesz(f, 1);
    const ScalarField r2 = riesz(f, 2);
    const ScalarField p = poisson_extend(f, 0.05);

    std::vector<std::future<ScalarField>> jobs;
    for (int rep = 0; rep < 4; ++rep) {
        jobs.push_back(std::async(std::launch::async, [&f] { return riesz(f, 1); }));
        jobs.push_back(std::async(std::launch::async, [&f] { return riesz(f, 2); }));
        jobs.push_back(
            std::async(std::launch::async, [&f] { return poisson_extend(f, 0.05); }));
    }
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const ScalarField out = jobs[i].get();
        const ScalarField& expected = (i % 3 == 0) ? r1 : (i % 3 == 1) ? r2 : p;
        CHECK(out.values == expected.values);
    }
}

TEST_CASE("dyadic maximal function") {
    const GridSpec s = make_grid(1, 8, 1.0);

    const ScalarField c = maximal_dyadic(constant_field(s, -3.0));
    for (double x : c.values) CHECK(x == doctest::Approx(3.0).epsilon(1e-14));

    // spike at index 0: enumerate the cubes containing each point
    const ScalarField spike(s, {8, 0, 0, 0, 0, 0, 0, 0});
    const ScalarField m = maximal_dyadic(spike);
    const std::vector<double> expected{8, 4, 2, 2, 1, 1, 1, 1};
    for (std::size_t i = 0; i < expected.size(); ++i)
        CHECK(m.values[i] == doctest::Approx(expected[i]).epsilon(1e-14));

    const GridSpec s2 = make_grid(2, 32, 1.0);
    const ScalarField f = testing::random_values_field(s2, 81);
    const ScalarField mf = maximal_dyadic(f);
    const double global_mean_abs = std::fabs(mean(f));
    for (std::size_t i = 0; i < f.size(); ++i) {
        CHECK(mf.values[i] >= std::fabs(f.values[i]) - 1e-14);
        CHECK(mf.values[i] >= global_mean_abs - 1e-14);
    }

    // positive homogeneity
    const ScalarField m3 = maximal_dyadic(scale(f, 3.0));
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(m3.values[i] == doctest::Approx(3.0 * mf.values[i]).epsilon(1e-13));
}
