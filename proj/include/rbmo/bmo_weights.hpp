#pragma once

#include <map>

#include "rbmo/grid.hpp"

namespace rbmo {

/// Result of a supremum scan over dyadic cubes: the global value, the cube
/// attaining it (first in level-ascending lexicographic order on ties),
/// and the per-level maxima for scale-stability diagnostics.
struct CubeSupremumReport {
    double value = 0.0;
    DyadicCube worst_cube;
    std::map<int, double> per_level;
    int min_level = 0;
    int max_level = 0;
};

/// Dyadic BMO norm with L1 oscillation:
/// sup_Q mean over Q of |u - <u>_Q|. Scans levels [min_level, max_level];
/// the default covers every dyadic level of the grid.
CubeSupremumReport bmo_norm(const ScalarField& u);
CubeSupremumReport bmo_norm(const ScalarField& u, int min_level, int max_level);

/// Muckenhoupt characteristic sup_Q <w>_Q <w^(-1/(p-1))>_Q^(p-1), p > 1.
CubeSupremumReport ap_characteristic(const ScalarField& w, double p);
CubeSupremumReport ap_characteristic(const ScalarField& w, double p, int min_level,
                                     int max_level);

/// Reverse Hoelder constant sup_Q <f^q>_Q / <f>_Q^q, q > 1.
CubeSupremumReport reverse_holder_constant(const ScalarField& f1, double q);
CubeSupremumReport reverse_holder_constant(const ScalarField& f1, double q,
                                           int min_level, int max_level);

/// f = v^alpha with v^2 in A2 below the threshold.
struct AlphaDecomposition {
    double alpha = 1.0;
    ScalarField v;
    double a2_of_v_squared = 1.0;
    double threshold = 4.0;
};

/// Smallest alpha in 1, 2, 4, ... (capped at 2^16) such that
/// [ (f^(1/alpha))^2 ]_{A2} <= tau. Throws when the cap is reached,
/// naming the last measured characteristic.
AlphaDecomposition find_alpha(const ScalarField& f, double tau = 4.0);

} // namespace rbmo
