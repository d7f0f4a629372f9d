#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qet/field_model.hpp"
#include "qet/spectral_engine.hpp"

namespace qet {

struct ProtocolConfig {
    ShapeField a_m;  // measurement probe coupling profile
    ShapeField f_o;  // operation profile at the receiver
    double T = 20.0;
    double lambda = 1.0;  // multiplies a_m
    // Lattice for the discrete transforms. Unset: closed form for curl-Gaussian
    // pairs, otherwise the native resolution of the first grid-sampled field.
    std::optional<GridSpec> grid;
    KernelTolerance tolerance{};
    double divergence_tol = 1e-3;
};

struct SpinOutcome {
    double E_m = 0.0;
    double eta = 0.0;
    double xi = 0.0;
    double theta_star = 0.0;
    double E_o = 0.0;
    double D_q = 1.0;
    double log_D_q = 0.0;
    double p_plus = 0.5;
    double p_minus = 0.5;
    double kernel = 0.0;  // K(T)
};

struct OscillatorOutcome {
    double E_m = 0.0;
    double eta_prime = 0.0;
    double xi = 0.0;
    double G2_vev = 0.0;
    double theta_prime_star = 0.0;
    double E_o_prime = 0.0;
    double D_ho = 1.0;
    double kernel = 0.0;
};

// Spectral integrals shared by both protocols for one configuration.
struct ProtocolIntegrals {
    double I0_f = 0.0;  // \int f_o^2
    double I1_a = 0.0;  // \int d^3k/(2pi)^3 |k| |a~|^2
    double I2_a = 0.0;  // \int d^3k/(2pi)^3 |k|^2 |a~|^2
    double kernel = 0.0;
    double kernel_error = 0.0;
    double vacuum_overlap = 1.0;  // <0|(0, 2 a_m)>
    double cos2G_vev = 0.0;       // <0|cos 2G|0>
};

// Required lower bound on T: center separation + R_f + R_a + 6 sigma_max.
double causal_time_bound(const ShapeField& a_m, const ShapeField& f_o);

// Throws ValidationError unless every field used is divergence-free and T
// exceeds the causal bound.
void validate_config(const ProtocolConfig& cfg);

ProtocolIntegrals protocol_integrals(const ProtocolConfig& cfg, unsigned workers = 1);

double input_energy(const ShapeField& a_m);
double damping_spin(const ShapeField& a_m);
double log_damping_spin(const ShapeField& a_m);
double damping_oscillator(const ShapeField& a_m);

SpinOutcome spin_outcome(const ProtocolIntegrals& in);
OscillatorOutcome oscillator_outcome(const ProtocolIntegrals& in);

SpinOutcome run_spin_protocol(const ProtocolConfig& cfg, unsigned workers = 1);
OscillatorOutcome run_oscillator_protocol(const ProtocolConfig& cfg, unsigned workers = 1);

// E(theta) - E(0) = theta*eta + theta^2 xi / 2, minimized at theta = -eta/xi.
double operation_energy_objective(double theta, double eta, double xi);

// lim_{lambda -> inf} |E_o'(lambda)| = K^2 / (4 I1 xi), evaluated at the shape of cfg.a_m.
double large_amplitude_limit(const ProtocolConfig& cfg, unsigned workers = 1);

struct CrossoverResult {
    double lambda_c = 0.0;
    double residual = 0.0;  // e^{u} - (1 + pi^2/4 + u) at u = 2 lambda_c^2 I1, relative
    int iterations = 0;
};
// Amplitude multiplier at which the oscillator probe starts to teleport more
// energy than the spin probe. Throws NumericalError without a sign change.
CrossoverResult crossover_amplitude(const ShapeField& a_m, double lambda_hi = 1e3);

struct ScalingFit {
    double slope_E_o = 0.0;
    double slope_E_o_prime = 0.0;
    double slope_kernel = 0.0;
    std::vector<double> T_used;
    std::vector<std::string> warnings;
};
// Least-squares slopes of log|E_o|, log|E_o'| and log|K| against log T.
ScalingFit separation_scaling_fit(const ProtocolConfig& cfg, const std::vector<double>& T_values,
                                  unsigned workers = 1);

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y, double* intercept = nullptr,
                           double* max_residual = nullptr);

struct PovmResiduals {
    double normalization = 0.0;  // max |\int M^2 dq - 1|
    double first_moment = 0.0;   // max |\int q M^2 dq - g|
    double second_moment = 0.0;  // max |\int q^2 M^2 dq - g^2 - 1/4|
    double spin_completeness = 0.0;  // max |cos^2 g + sin^2 g - 1|
    double spin_difference = 0.0;    // max |cos^2 g - sin^2 g - cos 2g|
};
PovmResiduals povm_identity_check(const std::vector<double>& g_values);

}  // namespace qet
