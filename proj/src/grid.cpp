#include "rbmo/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include "rbmo/kernels.hpp"

#include <json.hpp>

namespace rbmo {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void unflatten(std::size_t i, int dim, int points, std::array<int, 3>& k) {
    for (int d = dim - 1; d >= 0; --d) {
        k[d] = static_cast<int>(i % points);
        i /= points;
    }
}

double periodic_distance2(const std::array<double, 3>& a, const std::array<double, 3>& b,
                          int dim, double length) {
    double d2 = 0.0;
    for (int d = 0; d < dim; ++d) {
        double delta = std::fabs(a[d] - b[d]);
        if (delta > 0.5 * length) delta = length - delta;
        d2 += delta * delta;
    }
    return d2;
}

void require_same_spec(const ScalarField& a, const ScalarField& b) {
    if (!(a.spec == b.spec))
        throw std::invalid_argument("fields live on different grids");
}

ScalarField mapped(const ScalarField& a, double (*f)(double)) {
    ScalarField out(a.spec);
    kernels::map(a.values, out.values, f);
    return out;
}

} // namespace

std::size_t GridSpec::total() const {
    std::size_t t = 1;
    for (int d = 0; d < dim; ++d) t *= static_cast<std::size_t>(points);
    return t;
}

double GridSpec::cell_volume() const {
    double v = 1.0;
    for (int d = 0; d < dim; ++d) v *= spacing();
    return v;
}

int GridSpec::max_level() const {
    return std::countr_zero(static_cast<unsigned>(points));
}

GridSpec make_grid(int dim, int points, double length) {
    if (dim < 1 || dim > 3)
        throw std::invalid_argument("grid dimension must be 1, 2, or 3");
    if (!is_power_of_two(points) || points < 8)
        throw std::invalid_argument("points per axis must be a power of two >= 8");
    if (!(length > 0.0) || !std::isfinite(length))
        throw std::invalid_argument("grid period must be positive");
    return GridSpec{dim, points, length};
}

ScalarField::ScalarField(const GridSpec& s, std::vector<double> v)
    : spec(s), values(std::move(v)) {
    if (values.size() != spec.total())
        throw std::invalid_argument("value array does not match grid size");
}

std::array<double, 3> ScalarField::point(std::size_t i) const {
    std::array<int, 3> k{0, 0, 0};
    unflatten(i, spec.dim, spec.points, k);
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int d = 0; d < spec.dim; ++d) x[d] = spec.spacing() * k[d];
    return x;
}

double DyadicCube::side(const GridSpec& s) const {
    return s.length / static_cast<double>(1 << level);
}

std::array<double, 3> DyadicCube::center(const GridSpec& s) const {
    const double l = side(s);
    std::array<double, 3> c{0.0, 0.0, 0.0};
    for (int d = 0; d < s.dim; ++d) c[d] = (index[d] + 0.5) * l;
    return c;
}

int DyadicCube::cells_per_axis(const GridSpec& s) const { return s.points >> level; }

std::vector<DyadicCube> dyadic_cubes(const GridSpec& s, int min_level, int max_level) {
    if (min_level < 0 || min_level > max_level)
        throw std::invalid_argument("invalid dyadic level range");
    if ((1 << max_level) > s.points)
        throw std::invalid_argument("dyadic level exceeds grid resolution");
    std::vector<DyadicCube> cubes;
    for (int l = min_level; l <= max_level; ++l) {
        const int c = 1 << l;
        std::size_t count = 1;
        for (int d = 0; d < s.dim; ++d) count *= static_cast<std::size_t>(c);
        for (std::size_t q = 0; q < count; ++q) {
            DyadicCube cube;
            cube.level = l;
            std::size_t rest = q;
            for (int d = s.dim - 1; d >= 0; --d) {
                cube.index[d] = static_cast<int>(rest % c);
                rest /= c;
            }
            cubes.push_back(cube);
        }
    }
    return cubes;
}

double cube_average(const ScalarField& f, const DyadicCube& q) {
    const GridSpec& s = f.spec;
    if ((1 << q.level) > s.points)
        throw std::invalid_argument("cube level exceeds grid resolution");
    for (int d = 0; d < s.dim; ++d)
        if (q.index[d] < 0 || q.index[d] >= (1 << q.level))
            throw std::invalid_argument("cube index out of range");

    const int cells = q.cells_per_axis(s);
    std::array<int, 3> lo{0, 0, 0};
    for (int d = 0; d < s.dim; ++d) lo[d] = q.index[d] * cells;

    double acc = 0.0;
    std::size_t n = 0;
    if (s.dim == 1) {
        for (int i = 0; i < cells; ++i) acc += f.values[lo[0] + i];
        n = cells;
    } else if (s.dim == 2) {
        for (int i = 0; i < cells; ++i)
            for (int j = 0; j < cells; ++j)
                acc += f.values[static_cast<std::size_t>(lo[0] + i) * s.points + lo[1] + j];
        n = static_cast<std::size_t>(cells) * cells;
    } else {
        for (int i = 0; i < cells; ++i)
            for (int j = 0; j < cells; ++j)
                for (int m = 0; m < cells; ++m)
                    acc += f.values[(static_cast<std::size_t>(lo[0] + i) * s.points +
                                     static_cast<std::size_t>(lo[1] + j)) *
                                        s.points +
                                    lo[2] + m];
        n = static_cast<std::size_t>(cells) * cells * cells;
    }
    return acc / static_cast<double>(n);
}

double norm(const ScalarField& f, const NormSpec& ns) {
    if (ns.weight) return norm(f, ns.p, *ns.weight);
    return norm(f, ns.p);
}

double norm(const ScalarField& f, double p) {
    if (p < 1.0) throw std::invalid_argument("norm exponent must be >= 1");
    const double s = kernels::power_sum(f.values, nullptr, p) * f.spec.cell_volume();
    return std::pow(s, 1.0 / p);
}

double norm(const ScalarField& f, double p, const ScalarField& weight) {
    if (p < 1.0) throw std::invalid_argument("norm exponent must be >= 1");
    require_same_spec(f, weight);
    if (kernels::min_value(weight.values) <= 0.0)
        throw std::invalid_argument("norm weight must be positive");
    const double s =
        kernels::power_sum(f.values, weight.values.data(), p) * f.spec.cell_volume();
    return std::pow(s, 1.0 / p);
}

double mean(const ScalarField& f) {
    return kernels::sum(f.values) / static_cast<double>(f.size());
}

double min_value(const ScalarField& f) { return kernels::min_value(f.values); }

double max_abs(const ScalarField& f) { return kernels::max_abs(f.values); }

std::array<double, 3> box_center(const GridSpec& s) {
    std::array<double, 3> c{0.0, 0.0, 0.0};
    for (int d = 0; d < s.dim; ++d) c[d] = 0.5 * s.length;
    return c;
}

ScalarField constant_field(const GridSpec& s, double value) {
    return ScalarField(s, value);
}

ScalarField single_mode_field(const GridSpec& s, std::array<int, 3> wavevector,
                              double amplitude, double phase) {
    ScalarField out(s);
    const double two_pi_over_l = 2.0 * M_PI / s.length;
    const double h = s.spacing();
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(s.total());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        std::array<int, 3> k{0, 0, 0};
        unflatten(static_cast<std::size_t>(i), s.dim, s.points, k);
        double arg = phase;
        for (int d = 0; d < s.dim; ++d) arg += two_pi_over_l * wavevector[d] * (h * k[d]);
        out.values[i] = amplitude * std::cos(arg);
    }
    return out;
}

ScalarField ball_indicator_field(const GridSpec& s, std::array<double, 3> center,
                                 double radius, double floor_value) {
    if (radius <= 0.0) throw std::invalid_argument("ball radius must be positive");
    if (floor_value < 0.0) throw std::invalid_argument("ball floor must be >= 0");
    ScalarField out(s);
    const double r2 = radius * radius;
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(s.total());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto x = out.point(static_cast<std::size_t>(i));
        const double d2 = periodic_distance2(x, center, s.dim, s.length);
        out.values[i] = (d2 <= r2 ? 1.0 : 0.0) + floor_value;
    }
    return out;
}

ScalarField power_weight_field(const GridSpec& s, std::array<double, 3> center,
                               double exponent, double r0) {
    if (!(r0 > 0.0))
        throw std::invalid_argument(
            "power weight needs a positive regularization radius");
    ScalarField out(s);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(s.total());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto x = out.point(static_cast<std::size_t>(i));
        const double d = std::sqrt(periodic_distance2(x, center, s.dim, s.length));
        out.values[i] = std::pow(std::max(d, r0), exponent);
    }
    return out;
}

ScalarField random_bmo_field(const GridSpec& s, double amplitude, double smoothing,
                             std::uint64_t seed) {
    if (!(smoothing > 0.0))
        throw std::invalid_argument("random_bmo smoothing scale must be positive");

    // +-amplitude per dyadic block, block side ~ 4x the smoothing scale
    int level = static_cast<int>(std::lround(std::log2(s.length / (4.0 * smoothing))));
    level = std::clamp(level, 0, s.max_level());
    const int blocks = 1 << level;
    std::size_t block_count = 1;
    for (int d = 0; d < s.dim; ++d) block_count *= static_cast<std::size_t>(blocks);

    std::mt19937_64 rng(seed);
    std::vector<double> signs(block_count);
    for (std::size_t q = 0; q < block_count; ++q)
        signs[q] = (rng() & 1u) ? amplitude : -amplitude;

    const int shift = s.max_level() - level;
    ScalarField u(s);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(s.total());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        std::array<int, 3> k{0, 0, 0};
        unflatten(static_cast<std::size_t>(i), s.dim, s.points, k);
        std::size_t q = 0;
        for (int d = 0; d < s.dim; ++d)
            q = q * static_cast<std::size_t>(blocks) +
                static_cast<std::size_t>(k[d] >> shift);
        u.values[i] = signs[q];
    }

    // separable periodic Gaussian mollifier, truncated at 4 sigma
    const double h = s.spacing();
    const int radius = std::max(1, static_cast<int>(std::ceil(4.0 * smoothing / h)));
    std::vector<double> w(2 * radius + 1);
    double wsum = 0.0;
    for (int m = -radius; m <= radius; ++m) {
        w[m + radius] = std::exp(-0.5 * (m * h) * (m * h) / (smoothing * smoothing));
        wsum += w[m + radius];
    }
    for (double& x : w) x /= wsum;

    for (int axis = 0; axis < s.dim; ++axis) {
        ScalarField next(s);
        std::size_t stride = 1;
        for (int d = axis + 1; d < s.dim; ++d) stride *= static_cast<std::size_t>(s.points);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            std::array<int, 3> k{0, 0, 0};
            unflatten(static_cast<std::size_t>(i), s.dim, s.points, k);
            const std::size_t base =
                static_cast<std::size_t>(i) -
                static_cast<std::size_t>(k[axis]) * stride;
            double acc = 0.0;
            for (int m = -radius; m <= radius; ++m) {
                const int shifted = ((k[axis] + m) % s.points + s.points) % s.points;
                acc += w[m + radius] *
                       u.values[base + static_cast<std::size_t>(shifted) * stride];
            }
            next.values[i] = acc;
        }
        u = std::move(next);
    }

    return exp(u);
}

ScalarField add(const ScalarField& a, const ScalarField& b) {
    require_same_spec(a, b);
    ScalarField out(a.spec);
    kernels::zip(a.values, b.values, out.values, [](double x, double y) { return x + y; });
    return out;
}

ScalarField sub(const ScalarField& a, const ScalarField& b) {
    require_same_spec(a, b);
    ScalarField out(a.spec);
    kernels::zip(a.values, b.values, out.values, [](double x, double y) { return x - y; });
    return out;
}

ScalarField mul(const ScalarField& a, const ScalarField& b) {
    require_same_spec(a, b);
    ScalarField out(a.spec);
    kernels::zip(a.values, b.values, out.values, [](double x, double y) { return x * y; });
    return out;
}

ScalarField div(const ScalarField& a, const ScalarField& b) {
    require_same_spec(a, b);
    for (double x : b.values)
        if (x == 0.0) throw std::domain_error("division by a field with a zero value");
    ScalarField out(a.spec);
    kernels::zip(a.values, b.values, out.values, [](double x, double y) { return x / y; });
    return out;
}

ScalarField pow(const ScalarField& a, double exponent) {
    const bool integral = exponent == std::nearbyint(exponent);
    if (!integral) {
        for (double x : a.values)
            if (x <= 0.0)
                throw std::domain_error(
                    "fractional power of a non-positive field value");
    }
    ScalarField out(a.spec);
    kernels::map(a.values, out.values,
                 [exponent](double x) { return std::pow(x, exponent); });
    return out;
}

ScalarField abs(const ScalarField& a) { return mapped(a, [](double x) { return std::fabs(x); }); }

ScalarField exp(const ScalarField& a) { return mapped(a, [](double x) { return std::exp(x); }); }

ScalarField log(const ScalarField& a) {
    for (double x : a.values)
        if (x <= 0.0) throw std::domain_error("log of a non-positive field value");
    return mapped(a, [](double x) { return std::log(x); });
}

ScalarField scale(const ScalarField& a, double lambda) {
    ScalarField out(a.spec);
    kernels::map(a.values, out.values, [lambda](double x) { return lambda * x; });
    return out;
}

ScalarField max_with(const ScalarField& a, double floor_value) {
    ScalarField out(a.spec);
    kernels::map(a.values, out.values,
                 [floor_value](double x) { return std::max(x, floor_value); });
    return out;
}

void write_rfld(const std::filesystem::path& path, const ScalarField& f) {
    static_assert(std::endian::native == std::endian::little,
                  "RFLD writer assumes a little-endian host");
    nlohmann::ordered_json header;
    header["magic"] = "RFLD";
    header["version"] = 1;
    header["n"] = f.spec.dim;
    header["N"] = f.spec.points;
    header["L"] = f.spec.length;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << header.dump() << '\n';
    out.write(reinterpret_cast<const char*>(f.values.data()),
              static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

ScalarField read_rfld(const std::filesystem::path& path) {
    static_assert(std::endian::native == std::endian::little,
                  "RFLD reader assumes a little-endian host");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("missing RFLD header");

    int dim = 0;
    int points = 0;
    double length = 0.0;
    try {
        const nlohmann::json header = nlohmann::json::parse(line);
        if (header.value("magic", "") != "RFLD" || header.value("version", 0) != 1)
            throw std::runtime_error("not an RFLD v1 file: " + path.string());
        dim = header.at("n").get<int>();
        points = header.at("N").get<int>();
        length = header.at("L").get<double>();
    } catch (const nlohmann::json::exception&) {
        throw std::runtime_error("malformed RFLD header in " + path.string());
    }

    const GridSpec spec = make_grid(dim, points, length);
    ScalarField f(spec);
    in.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(f.values.size() * sizeof(double)))
        throw std::runtime_error("RFLD payload shorter than header promises: " +
                                 path.string());
    if (in.peek() != std::char_traits<char>::eof())
        throw std::runtime_error("RFLD payload longer than header promises: " +
                                 path.string());
    return f;
}

} // namespace rbmo
