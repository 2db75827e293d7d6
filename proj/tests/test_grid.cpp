#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "oracles.hpp"
#include "rbmo/grid.hpp"

using namespace rbmo;

namespace {
const double kTwoPi = 2.0 * M_PI;
}

TEST_CASE("make_grid validates its inputs") {
    const GridSpec s = make_grid(2, 128, kTwoPi);
    CHECK(s.total() == 16384);
    CHECK(make_grid(1, 8, 1.0).total() == 8);

    CHECK_THROWS_AS(make_grid(2, 100, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(0, 64, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(4, 64, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, 64, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, 64, -2.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, 4, 1.0), std::invalid_argument);
}

TEST_CASE("constant and single-mode generators") {
    const GridSpec s = make_grid(2, 16, kTwoPi);
    const ScalarField one = constant_field(s, 1.0);
    for (double x : one.values) CHECK(x == 1.0);

    const ScalarField c = single_mode_field(s, {1, 0, 0}, 1.0, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i)
        CHECK(c.values[i] == doctest::Approx(std::cos(c.point(i)[0])).epsilon(1e-14));
}

TEST_CASE("ball indicator volume fraction approaches pi/16") {
    const GridSpec s = make_grid(2, 256, 1.0);
    const ScalarField ball = ball_indicator_field(s, box_center(s), 0.25, 0.0);
    double ones = 0.0;
    for (double x : ball.values) ones += x;
    const double fraction = ones / static_cast<double>(s.total());
    CHECK(fraction == doctest::Approx(M_PI / 16.0).epsilon(0.02));
}

TEST_CASE("generator parameter validation") {
    const GridSpec s = make_grid(1, 16, 1.0);
    CHECK_THROWS_AS(power_weight_field(s, box_center(s), 0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(random_bmo_field(s, 1.0, 0.0, 7), std::invalid_argument);
    CHECK_THROWS_AS(random_bmo_field(s, 1.0, -1.0, 7), std::invalid_argument);
}

TEST_CASE("random_bmo is reproducible and positive") {
    const GridSpec s = make_grid(1, 64, 1.0);
    const ScalarField a = random_bmo_field(s, 1.0, 2.0 / 64.0, 42);
    const ScalarField b = random_bmo_field(s, 1.0, 2.0 / 64.0, 42);
    CHECK(a.values == b.values);
    CHECK(min_value(a) > 0.0);

    const ScalarField c = random_bmo_field(s, 1.0, 2.0 / 64.0, 43);
    CHECK(a.values != c.values);
}

TEST_CASE("dyadic cube enumeration") {
    CHECK(dyadic_cubes(make_grid(1, 8, 1.0), 0, 3).size() == 15);
    CHECK(dyadic_cubes(make_grid(2, 8, 1.0), 1, 1).size() == 4);
    CHECK_THROWS_AS(dyadic_cubes(make_grid(2, 8, 1.0), 0, 4), std::invalid_argument);
    CHECK_THROWS_AS(dyadic_cubes(make_grid(2, 8, 1.0), 2, 1), std::invalid_argument);

    // count per level is 2^(n l)
    const auto cubes = dyadic_cubes(make_grid(2, 16, 1.0), 2, 2);
    CHECK(cubes.size() == 16);
    for (const auto& q : cubes) CHECK(q.level == 2);
}

TEST_CASE("every grid point lies in exactly one cube per level") {
    const GridSpec s = make_grid(2, 16, 3.0);
    for (int level = 0; level <= 2; ++level) {
        const auto cubes = dyadic_cubes(s, level, level);
        const int cells = s.points >> level;
        for (std::size_t i = 0; i < s.total(); ++i) {
            const int k0 = static_cast<int>(i) / s.points;
            const int k1 = static_cast<int>(i) % s.points;
            int owners = 0;
            for (const auto& q : cubes)
                if (k0 / cells == q.index[0] && k1 / cells == q.index[1]) ++owners;
            CHECK(owners == 1);
        }
    }
}

TEST_CASE("cube averages") {
    const GridSpec s1 = make_grid(1, 8, 1.0);
    const ScalarField five = constant_field(s1, 5.0);
    for (const auto& q : dyadic_cubes(s1, 0, 3))
        CHECK(cube_average(five, q) == doctest::Approx(5.0));

    const ScalarField step(s1, {1, 1, 1, 1, 3, 3, 3, 3});
    DyadicCube left{1, {0, 0, 0}};
    CHECK(cube_average(step, left) == doctest::Approx(1.0));

    // level-0 average equals the direct global mean
    const ScalarField r = testing::random_values_field(make_grid(2, 16, 1.0), 5);
    double direct = 0.0;
    for (double x : r.values) direct += x;
    direct /= static_cast<double>(r.size());
    CHECK(cube_average(r, DyadicCube{}) == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("telescoping of dyadic means") {
    const ScalarField r = testing::random_values_field(make_grid(2, 32, 1.0), 11);
    const double global = cube_average(r, DyadicCube{});
    for (int level = 1; level <= 5; ++level) {
        double acc = 0.0;
        const auto cubes = dyadic_cubes(r.spec, level, level);
        for (const auto& q : cubes) acc += cube_average(r, q);
        acc /= static_cast<double>(cubes.size());
        CHECK(acc == doctest::Approx(global).epsilon(1e-12));
    }
}

TEST_CASE("norms") {
    const GridSpec s = make_grid(2, 16, 1.0);
    CHECK(norm(constant_field(s, 1.0), 2.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(norm(constant_field(s, 1.0), 2.0, constant_field(s, 4.0)) ==
          doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(norm(constant_field(s, 1.0), 0.5), std::invalid_argument);

    // cos(x) on [0, 2 pi): integral of cos^2 is pi
    const GridSpec s1 = make_grid(1, 64, kTwoPi);
    const ScalarField c = single_mode_field(s1, {1, 0, 0}, 1.0, 0.0);
    double quad = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
        quad += c.values[i] * c.values[i] * s1.spacing();
    CHECK(norm(c, 2.0) == doctest::Approx(std::sqrt(quad)).epsilon(1e-13));
    CHECK(norm(c, 2.0) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("weighted norm equals plain norm of f sqrt(w)") {
    const GridSpec s = make_grid(1, 64, 2.0);
    const ScalarField f = testing::random_values_field(s, 3);
    const ScalarField w = rbmo::exp(testing::random_values_field(s, 4));
    const double a = norm(f, 2.0, w);
    const double b = norm(mul(f, pow(w, 0.5)), 2.0);
    CHECK(a * a == doctest::Approx(b * b).epsilon(1e-12));
}

TEST_CASE("pointwise algebra") {
    const GridSpec s = make_grid(1, 16, 1.0);
    const ScalarField f = rbmo::exp(testing::random_values_field(s, 9));

    const ScalarField p1 = pow(f, 1.0);
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(p1.values[i] == doctest::Approx(f.values[i]).epsilon(1e-15));

    const ScalarField quot = div(f, f);
    for (double x : quot.values) CHECK(x == 1.0);

    const ScalarField roundtrip = rbmo::exp(rbmo::log(f));
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(roundtrip.values[i] == doctest::Approx(f.values[i]).epsilon(1e-12));

    ScalarField zeroed = f;
    zeroed.values[3] = 0.0;
    CHECK_THROWS_AS(div(f, zeroed), std::domain_error);
    CHECK_THROWS_AS(rbmo::log(sub(f, f)), std::domain_error);
    CHECK_THROWS_AS(pow(scale(f, -1.0), 0.5), std::domain_error);

    // integer powers of signed fields are fine
    const ScalarField sq = pow(scale(f, -1.0), 2.0);
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(sq.values[i] == doctest::Approx(f.values[i] * f.values[i]));

    const ScalarField m = max_with(testing::random_values_field(s, 2), 0.25);
    CHECK(min_value(m) >= 0.25);
}

TEST_CASE("RFLD round trip is bitwise and rejects bad payloads") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "rbmo_rfld_test";
    fs::create_directories(dir);

    const GridSpec s = make_grid(2, 16, kTwoPi);
    const ScalarField f = testing::random_values_field(s, 123);
    const fs::path file = dir / "f.rfld";
    write_rfld(file, f);

    const ScalarField g = read_rfld(file);
    CHECK(g.spec == f.spec);
    CHECK(g.values == f.values);

    // truncated payload
    {
        std::ifstream in(file, std::ios::binary);
        std::string all((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
        std::ofstream out(dir / "short.rfld", std::ios::binary);
        out.write(all.data(), static_cast<std::streamsize>(all.size() - 8));
    }
    CHECK_THROWS_AS(read_rfld(dir / "short.rfld"), std::runtime_error);

    // trailing garbage
    {
        std::ifstream in(file, std::ios::binary);
        std::string all((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
        std::ofstream out(dir / "long.rfld", std::ios::binary);
        out.write(all.data(), static_cast<std::streamsize>(all.size()));
        const double extra = 1.0;
        out.write(reinterpret_cast<const char*>(&extra), sizeof(extra));
    }
    CHECK_THROWS_AS(read_rfld(dir / "long.rfld"), std::runtime_error);

    {
        std::ofstream out(dir / "bad.rfld", std::ios::binary);
        out << "{\"magic\":\"NOPE\",\"version\":1,\"n\":1,\"N\":8,\"L\":1.0}\n";
    }
    CHECK_THROWS_AS(read_rfld(dir / "bad.rfld"), std::runtime_error);

    fs::remove_all(dir);
}
