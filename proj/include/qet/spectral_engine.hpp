#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "qet/field_model.hpp"

namespace qet {

enum class IntegralMethod { RadialQuadrature, GridSum, MonteCarlo };

struct IntegralResult {
    double value = 0.0;
    double estimated_error = 0.0;
    IntegralMethod method = IntegralMethod::RadialQuadrature;
    std::uint64_t samples_or_nodes = 0;
    std::optional<std::uint64_t> seed;
};

// Lorentz-invariant kernels, each as a spectral weight w(|k|, t) with
// F(t, x) = \int d^3k/(2pi)^3 w(|k|, t) e^{ik.x}.
enum class DeltaKind { Delta, Delta1, Delta2, dtDelta2, dTTDelta };

struct DeltaKernel {
    DeltaKind kind;
    double spectral_weight(double k, double t) const;
    // Off-cone position-space value. Delta1, Delta2 and dtDelta2 vanish there.
    double off_cone(double t, double r) const;
};

// Relative half-width of the excluded light-cone band.
inline constexpr double kConeEpsilon = 1e-9;

// \int d^3k/(2pi)^3 |k|^p |a~(k)|^2 for p in {0,1,2}.
IntegralResult weighted_spectral_integral(const SpectralField& sf, int p, unsigned workers = 1);

// -1 / (2 pi^2 (t^2 - r^2)) off the light cone.
double pauli_jordan_delta(double t, double r);

// Same quantity from the regulated radial integral
// (1/2pi^2) \int k j0(kr) cos(kt) e^{-eta k^2} dk.
IntegralResult pauli_jordan_delta_quadrature(double t, double r, double eta = 1e-6);

struct KernelTolerance {
    double rel = 1e-6;
    // Absolute floor relative to \int |integrand|; radial integrals that cancel
    // down to this level cannot be resolved more finely in double precision.
    double l1_floor = 1e-13;
};

// Radial weight w(k) = envelope(k) * trig(k * frequency).
struct RadialWeight {
    enum class Trig { None, Cos, Sin };
    std::function<double(double)> envelope;
    Trig trig = Trig::None;
    double frequency = 0.0;

    double operator()(double k) const;
};

// Re \int d^3k/(2pi)^3 w(|k|) f~(k)^* . a~(k). Closed forms reduce to one
// radial integral per term pair; grids sum over nodes. Trigonometric weights
// are integrated both by panelled tanh-sinh and by Ooura's Fourier transform
// rule, keeping whichever reports the smaller error.
IntegralResult spectral_pairing(const SpectralField& f, const SpectralField& a, const RadialWeight& weight,
                                unsigned workers = 1);

// \int\int d_T^2 Delta(T, x-y) f(x).a(y): spectral weight -|k| cos(|k| T).
// Throws NumericalError when the quadrature error estimate exceeds tol.
IntegralResult overlap_kernel(const SpectralField& f_o, const SpectralField& a_m, double T,
                              KernelTolerance tol = {}, unsigned workers = 1);

// \int\int d_T Delta2(T, x-y) f(x).a(y): spectral weight -|k| sin(|k| T).
double commutator_residual(const SpectralField& f_o, const SpectralField& a_m, double T, unsigned workers = 1);

// Distance from the field centers that the oracle's sample balls must stay
// clear of the light cone by, in units of the larger sigma.
inline constexpr double kOracleConeMargin = 2.0;

// 6D Monte Carlo estimate of the same double integral in position space with
// the closed-form off-cone kernel. Each point is sampled from a truncated
// Gaussian around its field's center; samples come in batches of 4096 seeded
// from (seed, batch), so the value depends only on (inputs, samples, seed).
IntegralResult brute_force_overlap_oracle(const ShapeField& f_o, const ShapeField& a_m, double T,
                                          std::uint64_t samples, std::uint64_t seed, unsigned workers = 1);

}  // namespace qet
