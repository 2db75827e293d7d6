#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace rbmo {

/// Geometry of a periodic sampling grid on the torus [0,L)^n.
/// Points sit at x = (L/N)*k, k in {0,...,N-1}^n, flattened row-major
/// (axis 0 slowest). N must be a power of two so dyadic cubes align
/// exactly with grid cells.
struct GridSpec {
    int dim = 1;         // n, spatial dimension, 1..3
    int points = 8;      // N, points per axis, power of two >= 8
    double length = 1.0; // L, box period

    std::size_t total() const;
    double spacing() const { return length / points; }
    double cell_volume() const;
    int max_level() const; // log2(N)

    bool operator==(const GridSpec&) const = default;
};

GridSpec make_grid(int dim, int points, double length);

/// A real scalar field sampled on a GridSpec's points. Plain value type;
/// positivity (required for f, v, w, g1, g2) is checked by the operations
/// that need it, not by the container.
struct ScalarField {
    GridSpec spec;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const GridSpec& s, double fill = 0.0)
        : spec(s), values(s.total(), fill) {}
    ScalarField(const GridSpec& s, std::vector<double> v);

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }

    // grid-point coordinates of flat index i; unused axes are 0
    std::array<double, 3> point(std::size_t i) const;
};

/// Half-open dyadic subcube of the box: at level l the box splits into
/// 2^l cubes per axis; index[d] in [0, 2^l).
struct DyadicCube {
    int level = 0;
    std::array<int, 3> index{0, 0, 0};

    double side(const GridSpec& s) const;
    std::array<double, 3> center(const GridSpec& s) const;
    int cells_per_axis(const GridSpec& s) const; // N / 2^level
};

/// All cubes of levels [min_level, max_level], levels ascending,
/// lexicographic within a level. Requires 2^max_level <= N.
std::vector<DyadicCube> dyadic_cubes(const GridSpec& s, int min_level, int max_level);

/// Arithmetic mean of the field over the cube's grid points.
double cube_average(const ScalarField& f, const DyadicCube& q);

/// Lp norm with optional weight: (sum |f|^p w (L/N)^n)^(1/p).
struct NormSpec {
    double p = 2.0;
    std::optional<ScalarField> weight;
};
double norm(const ScalarField& f, const NormSpec& ns);
double norm(const ScalarField& f, double p);
double norm(const ScalarField& f, double p, const ScalarField& weight);

double mean(const ScalarField& f);
double min_value(const ScalarField& f);
double max_abs(const ScalarField& f);

// --- generators ------------------------------------------------------------

ScalarField constant_field(const GridSpec& s, double value);

/// amplitude * cos(<xi_k, x> + phase), xi_k = (2*pi/L) k.
ScalarField single_mode_field(const GridSpec& s, std::array<int, 3> wavevector,
                              double amplitude, double phase);

/// 1 inside the periodized ball of given radius, 0 outside, plus floor.
ScalarField ball_indicator_field(const GridSpec& s, std::array<double, 3> center,
                                 double radius, double floor_value = 0.0);

/// (max(|x-center|_periodic, r0))^a; r0 > 0 keeps the value finite when a
/// grid point coincides with the singularity.
ScalarField power_weight_field(const GridSpec& s, std::array<double, 3> center,
                               double exponent, double r0);

/// exp(u) where u is a random +-amplitude sign pattern on dyadic blocks,
/// mollified with a periodic Gaussian of width `smoothing`. log of the
/// result oscillates at scale `amplitude`; bitwise reproducible per seed.
ScalarField random_bmo_field(const GridSpec& s, double amplitude, double smoothing,
                             std::uint64_t seed);

std::array<double, 3> box_center(const GridSpec& s);

// --- pointwise algebra -------------------------------------------------------

ScalarField add(const ScalarField& a, const ScalarField& b);
ScalarField sub(const ScalarField& a, const ScalarField& b);
ScalarField mul(const ScalarField& a, const ScalarField& b);
ScalarField div(const ScalarField& a, const ScalarField& b); // rejects zero divisor values
ScalarField pow(const ScalarField& a, double exponent);      // fractional exponent needs positive base
ScalarField abs(const ScalarField& a);
ScalarField exp(const ScalarField& a);
ScalarField log(const ScalarField& a);                       // positive input only
ScalarField scale(const ScalarField& a, double lambda);
ScalarField max_with(const ScalarField& a, double floor_value);

// --- RFLD v1 file format -----------------------------------------------------
// One JSON header line {"magic":"RFLD","version":1,"n":..,"N":..,"L":..}
// terminated by '\n', followed by N^n IEEE-754 binary64 little-endian
// values in row-major order. Readers reject mismatched payload length.

void write_rfld(const std::filesystem::path& path, const ScalarField& f);
ScalarField read_rfld(const std::filesystem::path& path);

} // namespace rbmo
