#pragma once

#include <span>

#include "rbmo/bmo_weights.hpp"
#include "rbmo/construction.hpp"
#include "rbmo/grid.hpp"
#include "rbmo/report.hpp"

namespace rbmo {

/// Maximum-principle majorization with constant exactly 1: for each t,
/// |F|^eps at height t0+t must not exceed the Poisson extension by t of
/// |F|^eps at height t0. Reports the largest signed residual relative to
/// max(RHS); requires eps > (n-1)/n.
VerificationReport check_majorization(const ScalarField& f, double eps, double t0,
                                      std::span<const double> t_list,
                                      double tol = 1e-6);

/// Discrete Laplacian of |F|^eps on the slab grid x heights (spectral in
/// x, 3-point in t with uniform spacing h): reports the most negative
/// value; passes when min >= -tol * max|u| / h^2.
VerificationReport check_subharmonicity(const ScalarField& f, double eps,
                                        std::span<const double> heights, double h,
                                        double tol = 1e-5);

/// Key pointwise inequality P_t[f1^q] <= C1 (P_t[f1])^q with f1 = f^(1/q):
/// measures the empirical C1 per height and its stability across heights.
VerificationReport check_key_inequality(const ScalarField& f, double q,
                                        std::span<const double> t_list);

/// L1 mass of the kernel side/(side^2+|x-y|^2)^((n+1)/2) outside the cube
/// expanded by the given factor (periodized distances). Returns 0 when the
/// expanded cube covers the torus.
double phi_tail_norm(const GridSpec& s, const DyadicCube& cube, double expansion);

/// Sufficiency chain on f^rho: measured c = max |R_j f^rho| / f^rho, the
/// reverse Hoelder profile of f^(rho*eps) across dyadic levels, and the
/// BMO norm of log f^rho. Passes when c is finite, the per-level reverse
/// Hoelder constants stay within a 2x spread and the BMO norm is finite.
VerificationReport check_sufficiency(const ScalarField& f, double rho = 1.0,
                                     int rhi_min_level = 0, int rhi_max_level = 5);

/// Full round trip: factorize f, certify, run the sufficiency chain on g1
/// and g2, and check the BMO triangle bound
/// bmo(log f) <= |alpha| (bmo(log g1) + bmo(log g2)) (1 + 1e-9).
VerificationReport roundtrip(const ScalarField& f, const BuildConfig& cfg = {});

} // namespace rbmo
