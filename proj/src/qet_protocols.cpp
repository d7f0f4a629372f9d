#include "qet/qet_protocols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qet/coherent_algebra.hpp"
#include "qet/errors.hpp"
#include "qet/quadrature.hpp"

namespace qet {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPiSqQuarter = kPi * kPi / 4.0;
constexpr double kCausalSigmas = 6.0;
constexpr double kIdentityTol = 1e-12;

void require_divergence_free(const ShapeField& f, const char* role, double tol = 1e-3) {
    // The curl-Gaussian family is divergence-free identically.
    if (f.family() == FieldFamily::CurlGaussian) return;
    const auto rep = check_divergence_free(f, tol);
    if (!rep.pass) {
        std::ostringstream msg;
        msg << role << ": field is not divergence-free (max |div| = " << rep.max_residual << ", allowed "
            << rep.threshold << ")";
        throw ValidationError(msg.str());
    }
}

double relative_gap(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

std::optional<GridSpec> native_spec(const ShapeField& f) {
    const VectorGrid* g = f.grid();
    if (!g) return std::nullopt;
    const std::size_t n = std::max({g->dims[0], g->dims[1], g->dims[2]});
    return GridSpec{n + (n % 2), kPi / g->spacing};
}

// Both transforms must land on the same k lattice.
std::optional<GridSpec> shared_grid(const ProtocolConfig& cfg) {
    if (cfg.grid) return cfg.grid;
    if (auto g = native_spec(cfg.a_m)) return g;
    return native_spec(cfg.f_o);
}

}  // namespace

double causal_time_bound(const ShapeField& a_m, const ShapeField& f_o) {
    return norm(f_o.center() - a_m.center()) + a_m.effective_radius() + f_o.effective_radius() +
           kCausalSigmas * std::max(a_m.sigma(), f_o.sigma());
}

void validate_config(const ProtocolConfig& cfg) {
    require_divergence_free(cfg.a_m, "a_m", cfg.divergence_tol);
    require_divergence_free(cfg.f_o, "f_o", cfg.divergence_tol);
    if (!std::isfinite(cfg.lambda)) throw ValidationError("lambda must be finite");
    const double bound = causal_time_bound(cfg.a_m, cfg.f_o);
    if (!(cfg.T > bound)) {
        std::ostringstream msg;
        msg << "T = " << cfg.T << " violates causal decoupling; need T > " << bound
            << " (center separation + R(a_m) + R(f_o) + 6 sigma)";
        throw ValidationError(msg.str());
    }
}

ProtocolIntegrals protocol_integrals(const ProtocolConfig& cfg, unsigned workers) {
    validate_config(cfg);
    const auto grid = shared_grid(cfg);
    const SpectralField sa = spectral_transform(cfg.a_m.scaled(cfg.lambda), grid);
    const SpectralField sf = spectral_transform(cfg.f_o, grid);
    ProtocolIntegrals in;
    in.I0_f = weighted_spectral_integral(sf, 0, workers).value;
    if (!(in.I0_f > 0.0)) throw ValidationError("f_o has zero norm; the operation is undefined");
    in.I1_a = weighted_spectral_integral(sa, 1, workers).value;
    in.I2_a = weighted_spectral_integral(sa, 2, workers).value;
    const auto k = overlap_kernel(sf, sa, cfg.T, cfg.tolerance, workers);
    in.kernel = k.value;
    in.kernel_error = k.estimated_error;

    const CoherentLabel plus{SpectralField{}, sa.scaled(2.0)};
    const CoherentLabel minus{SpectralField{}, sa.scaled(-2.0)};
    const Complex op = coherent_inner_product(CoherentLabel::vacuum(), plus);
    const Complex om = coherent_inner_product(CoherentLabel::vacuum(), minus);
    in.vacuum_overlap = op.real();
    // cos(2G)|0> = (i/2)(|(0,2a)> - |(0,-2a)>)
    in.cos2G_vev = std::real(Complex(0.0, 0.5) * (op - om));
    return in;
}

double input_energy(const ShapeField& a_m) {
    require_divergence_free(a_m, "a_m");
    return 0.5 * weighted_spectral_integral(spectral_transform(a_m), 2).value;
}

double log_damping_spin(const ShapeField& a_m) {
    require_divergence_free(a_m, "a_m");
    return -2.0 * weighted_spectral_integral(spectral_transform(a_m), 1).value;
}

double damping_spin(const ShapeField& a_m) { return std::exp(log_damping_spin(a_m)); }

double damping_oscillator(const ShapeField& a_m) {
    require_divergence_free(a_m, "a_m");
    const double I1 = weighted_spectral_integral(spectral_transform(a_m), 1).value;
    return 1.0 / (1.0 + kPiSqQuarter + 2.0 * I1);
}

SpinOutcome spin_outcome(const ProtocolIntegrals& in) {
    SpinOutcome out;
    out.E_m = 0.5 * in.I2_a;
    out.xi = in.I0_f;
    out.kernel = in.kernel;
    out.log_D_q = -2.0 * in.I1_a;
    out.D_q = std::exp(out.log_D_q);
    out.eta = in.vacuum_overlap * in.kernel;
    out.theta_star = out.eta == 0.0 ? 0.0 : -out.eta / out.xi;
    out.E_o = out.eta == 0.0 ? 0.0 : -out.eta * out.eta / (2.0 * out.xi);
    out.p_plus = 0.5 * (1.0 + in.cos2G_vev);
    out.p_minus = 0.5 * (1.0 - in.cos2G_vev);

    if (out.D_q > std::numeric_limits<double>::min() * 1e16) {
        const double assembled = -out.D_q * in.kernel * in.kernel / (2.0 * out.xi);
        if (relative_gap(out.E_o, assembled) > kIdentityTol) {
            std::ostringstream msg;
            msg << "spin protocol: E_o = " << out.E_o << " disagrees with -D_q K^2/(2 xi) = " << assembled;
            throw NumericalError(msg.str());
        }
    }
    return out;
}

OscillatorOutcome oscillator_outcome(const ProtocolIntegrals& in) {
    OscillatorOutcome out;
    out.E_m = 0.5 * in.I2_a;
    out.xi = in.I0_f;
    out.kernel = in.kernel;
    out.eta_prime = 0.5 * in.kernel;
    out.G2_vev = kPi * kPi / 16.0 + 0.5 * in.I1_a;
    const double g = out.G2_vev + 0.25;
    out.theta_prime_star = out.eta_prime == 0.0 ? 0.0 : -out.eta_prime / (out.xi * g);
    out.E_o_prime = out.eta_prime == 0.0 ? 0.0 : -out.eta_prime * out.eta_prime / (2.0 * out.xi * g);
    out.D_ho = 1.0 / (4.0 * out.G2_vev + 1.0);

    const double assembled = -out.D_ho * in.kernel * in.kernel / (2.0 * out.xi);
    if (relative_gap(out.E_o_prime, assembled) > kIdentityTol) {
        std::ostringstream msg;
        msg << "oscillator protocol: E_o' = " << out.E_o_prime << " disagrees with -D_ho K^2/(2 xi) = " << assembled;
        throw NumericalError(msg.str());
    }
    return out;
}

SpinOutcome run_spin_protocol(const ProtocolConfig& cfg, unsigned workers) {
    return spin_outcome(protocol_integrals(cfg, workers));
}

OscillatorOutcome run_oscillator_protocol(const ProtocolConfig& cfg, unsigned workers) {
    return oscillator_outcome(protocol_integrals(cfg, workers));
}

double operation_energy_objective(double theta, double eta, double xi) { return theta * eta + 0.5 * theta * theta * xi; }

double large_amplitude_limit(const ProtocolConfig& cfg, unsigned workers) {
    const auto in = protocol_integrals(cfg, workers);
    if (!(in.I1_a > 0.0)) throw ValidationError("large_amplitude_limit: a_m has I1 = 0, rescaling undefined");
    return in.kernel * in.kernel / (4.0 * in.I1_a * in.I0_f);
}

CrossoverResult crossover_amplitude(const ShapeField& a_m, double lambda_hi) {
    require_divergence_free(a_m, "a_m");
    const double I1 = weighted_spectral_integral(spectral_transform(a_m), 1).value;
    if (!(I1 > 0.0)) throw ValidationError("crossover_amplitude: a_m has I1 = 0");
    // log(|E_o'| / |E_o|) = log(D_ho / D_q); logs keep D_q from underflowing.
    auto g = [I1](double lambda) {
        const double u = 2.0 * lambda * lambda * I1;
        return u - std::log1p(kPiSqQuarter + u);
    };
    double lo = 0.0, hi = lambda_hi;
    if (!(g(lo) < 0.0 && g(hi) > 0.0)) {
        std::ostringstream msg;
        msg << "crossover_amplitude: no sign change of log(D_ho/D_q) on [0, " << lambda_hi << "]";
        throw NumericalError(msg.str());
    }
    CrossoverResult out;
    while (true) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (g(mid) < 0.0 ? lo : hi) = mid;
        ++out.iterations;
    }
    out.lambda_c = std::abs(g(lo)) <= std::abs(g(hi)) ? lo : hi;
    const double u = 2.0 * out.lambda_c * out.lambda_c * I1;
    out.residual = (std::exp(u) - (1.0 + kPiSqQuarter + u)) / (1.0 + kPiSqQuarter + u);
    return out;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y, double* intercept,
                           double* max_residual) {
    if (x.size() != y.size() || x.size() < 2) throw ValidationError("least_squares_slope: need >= 2 paired points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw ValidationError("least_squares_slope: x values are all equal");
    const double slope = sxy / sxx;
    const double b = my - slope * mx;
    if (intercept) *intercept = b;
    if (max_residual) {
        double r = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) r = std::max(r, std::abs(y[i] - (slope * x[i] + b)));
        *max_residual = r;
    }
    return slope;
}

ScalingFit separation_scaling_fit(const ProtocolConfig& cfg, const std::vector<double>& T_values, unsigned workers) {
    if (T_values.size() < 2) throw ValidationError("separation_scaling_fit: need at least two T values");
    const auto [tmin, tmax] = std::minmax_element(T_values.begin(), T_values.end());
    if (*tmax < 10.0 * *tmin) throw ValidationError("separation_scaling_fit: T values must span at least one decade");
    ScalingFit fit;
    std::vector<double> lx, ls, lo, lk;
    for (double T : T_values) {
        ProtocolConfig c = cfg;
        c.T = T;
        const auto in = protocol_integrals(c, workers);
        const auto s = spin_outcome(in);
        const auto o = oscillator_outcome(in);
        if (std::abs(s.E_o) < 1e-300 || std::abs(o.E_o_prime) < 1e-300) {
            std::ostringstream msg;
            msg << "T = " << T << ": |E_o| below 1e-300, point dropped";
            fit.warnings.push_back(msg.str());
            continue;
        }
        fit.T_used.push_back(T);
        lx.push_back(std::log(T));
        ls.push_back(std::log(std::abs(s.E_o)));
        lo.push_back(std::log(std::abs(o.E_o_prime)));
        lk.push_back(std::log(std::abs(in.kernel)));
    }
    if (lx.size() < 2) throw NumericalError("separation_scaling_fit: fewer than two usable points");
    fit.slope_E_o = least_squares_slope(lx, ls);
    fit.slope_E_o_prime = least_squares_slope(lx, lo);
    fit.slope_kernel = least_squares_slope(lx, lk);
    return fit;
}

PovmResiduals povm_identity_check(const std::vector<double>& g_values) {
    PovmResiduals r;
    const double norm = std::sqrt(2.0 / kPi);
    for (double g : g_values) {
        // M_q^dag M_q at eigenvalue g is sqrt(2/pi) exp(-2 (q - g)^2).
        auto moment = [&](int n) {
            auto f = [&](double q) { return std::pow(q, n) * norm * std::exp(-2.0 * (q - g) * (q - g)); };
            return quad::panel_tanh_sinh(f, g - 8.0, g + 8.0, 1.0).value;
        };
        r.normalization = std::max(r.normalization, std::abs(moment(0) - 1.0));
        r.first_moment = std::max(r.first_moment, std::abs(moment(1) - g));
        r.second_moment = std::max(r.second_moment, std::abs(moment(2) - (g * g + 0.25)));
        const double c = std::cos(g), s = std::sin(g);
        r.spin_completeness = std::max(r.spin_completeness, std::abs(c * c + s * s - 1.0));
        r.spin_difference = std::max(r.spin_difference, std::abs(c * c - s * s - std::cos(2.0 * g)));
    }
    return r;
}

}  // namespace qet
