#pragma once

#include <complex>
#include <vector>

#include "rbmo/grid.hpp"

namespace rbmo {

/// Fourier-coefficient representation of a field, under the convention
///   f(x) = sum_k c_k exp(i <xi_k, x>),  xi_k = (2*pi/L) k,
/// with integer wavevectors k in (-N/2, N/2]^n stored in DFT bin order
/// (bin j along an axis carries k = j for j <= N/2, else j - N).
struct SpectralField {
    GridSpec spec;
    std::vector<std::complex<double>> coefficients;
};

SpectralField analyze(const ScalarField& f);
ScalarField synthesize(const SpectralField& c);

/// j-th Riesz transform, multiplier -i xi_j / |xi| (j in 1..n). The zero
/// mode is annihilated, as are the unpaired Nyquist lines |k_d| = N/2,
/// which have no sign partner on the grid; this keeps real fields real
/// and the transform exactly anti-self-adjoint.
ScalarField riesz(const ScalarField& f, int j);

/// Conjugate-function operator on the circle (n = 1), multiplier -i sgn(k).
ScalarField hilbert_circle(const ScalarField& f);

/// Harmonic extension to height t > 0, multiplier exp(-t |xi|). Equals
/// convolution with the periodized, mass-normalized Poisson kernel, so
/// constants are fixed and positivity is preserved.
ScalarField poisson_extend(const ScalarField& f, double t);

/// Laplacian in the grid variables, multiplier -|xi|^2.
ScalarField laplacian(const ScalarField& f);

/// The conjugate harmonic system at height t:
/// components = (P_t f, P_t R_1 f, ..., P_t R_n f).
struct ConjugateSystem {
    double t = 0.0;
    std::vector<ScalarField> components; // n+1 entries
};

ConjugateSystem conjugate_system(const ScalarField& f, double t);

/// Pointwise (sum of squared components)^(eps/2).
ScalarField system_magnitude_power(const ConjugateSystem& sys, double eps);

/// Dyadic maximal function: at each point, the largest average of |f|
/// over the dyadic cubes containing it.
ScalarField maximal_dyadic(const ScalarField& f);

} // namespace rbmo
