#include "qet/spectral_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "qet/errors.hpp"
#include "qet/quadrature.hpp"
#include "qet/random.hpp"
#include "qet/reduction.hpp"

namespace qet {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPiCubed = 8.0 * kPi * kPi * kPi;
// Gaussian exponent at the radial cutoff: e^{-75} is far below double epsilon
// relative to the peak of any k^n e^{-s k^2} integrand used here.
constexpr double kCutoffExponent = 75.0;

// Spherical Bessel j0 and j2. Power series below x = 1 avoid the cancellation
// in the closed forms.
double sph_j(int l, double x) {
    if (x < 1.0) {
        const double x2 = x * x;
        double df = 1.0;  // (2l+1)!!
        for (int m = 3; m <= 2 * l + 1; m += 2) df *= m;
        double term = std::pow(x, l) / df;
        double sum = term;
        for (int n = 1; n < 14; ++n) {
            term *= -x2 / (2.0 * n * (2.0 * n + 2.0 * l + 1.0));
            sum += term;
        }
        return sum;
    }
    const double s = std::sin(x), c = std::cos(x);
    if (l == 0) return s / x;
    return (3.0 / (x * x * x) - 1.0 / x) * s - 3.0 * c / (x * x);
}

// \int_0^inf g(k) cos(k w) dk (or sin), with the signed frequency folded in.
std::pair<double, double> fourier_integral(const std::function<double(double)>& g, bool cosine, double w) {
    const double sign = (!cosine && w < 0.0) ? -1.0 : 1.0;
    const double omega = std::abs(w);
    if (cosine) {
        boost::math::quadrature::ooura_fourier_cos<double> rule(1e-13);
        const auto [v, e] = rule.integrate(g, omega);
        return {v, e * std::abs(v)};
    }
    boost::math::quadrature::ooura_fourier_sin<double> rule(1e-13);
    const auto [v, e] = rule.integrate(g, omega);
    return {sign * v, e * std::abs(v)};
}

void require_transverse(const SpectralField& sf, const char* what) {
    if (sf.representation() != SpectralRepresentation::Grid) return;
    const auto inv = check_spectral_invariants(sf);
    if (inv.max_longitudinal > 1e-6) {
        std::ostringstream msg;
        msg << what << ": input is not transverse (max |k.a|/(|k| max|a|) = " << inv.max_longitudinal << ")";
        throw ValidationError(msg.str());
    }
}

struct PairingOut {
    double value = 0.0;
    double error = 0.0;
    double l1 = 0.0;
    std::uint64_t nodes = 0;
    IntegralMethod method = IntegralMethod::RadialQuadrature;
};

PairingOut pairing_impl(const SpectralField& f, const SpectralField& a, const RadialWeight& weight,
                        unsigned workers) {
    PairingOut out;
    if (f.representation() == SpectralRepresentation::ClosedForm &&
        a.representation() == SpectralRepresentation::ClosedForm) {
        // Pair terms are summed in sorted order so the result does not depend
        // on the order of terms, making pairing(f, a) == pairing(a, f) exactly.
        std::vector<double> pair_values;
        for (const auto& ti : f.terms())
            for (const auto& tj : a.terms()) {
                if (ti.amplitude == 0.0 || tj.amplitude == 0.0) continue;
                const Vec3 d = ti.center - tj.center;
                const double dn = norm(d);
                const Vec3 dh = dn > 0.0 ? (1.0 / dn) * d : Vec3{};
                const double nn = dot(ti.axis, tj.axis);
                const double dd = dot(dh, ti.axis) * dot(dh, tj.axis) - nn / 3.0;
                const double s = 0.5 * (ti.sigma * ti.sigma + tj.sigma * tj.sigma);
                const double pref = 4.0 * kPi * ti.amplitude * tj.amplitude * std::pow(ti.sigma * tj.sigma, 3);
                // Everything except the trigonometric factor of the weight.
                auto smooth = [&](double k) {
                    const double kd = k * dn;
                    const double ang = (2.0 / 3.0) * nn * sph_j(0, kd) + (dn > 0.0 ? sph_j(2, kd) * dd : 0.0);
                    const double k2 = k * k;
                    return k2 * k2 * weight.envelope(k) * std::exp(-s * k2) * ang;
                };
                auto integrand = [&](double k) {
                    switch (weight.trig) {
                        case RadialWeight::Trig::Cos: return smooth(k) * std::cos(k * weight.frequency);
                        case RadialWeight::Trig::Sin: return smooth(k) * std::sin(k * weight.frequency);
                        default: return smooth(k);
                    }
                };
                const double k_max = std::sqrt(kCutoffExponent / s);
                const double omega = weight.trig == RadialWeight::Trig::None ? 0.0 : std::abs(weight.frequency);
                const double panel = std::min(kPi / (omega + dn + 1e-300), 0.5 / std::sqrt(s));
                const auto r = quad::panel_tanh_sinh(integrand, 0.0, k_max, panel);
                double value = r.value, error = r.error;
                if (omega > 0.0) {
                    const auto [v, e] = fourier_integral(smooth, weight.trig == RadialWeight::Trig::Cos, weight.frequency);
                    if (std::isfinite(v) && e < error) {
                        value = v;
                        error = e;
                    }
                }
                pair_values.push_back(pref * value);
                out.error += std::abs(pref) * error;
                out.l1 += std::abs(pref) * r.l1;
                out.nodes += r.panels;
            }
        std::sort(pair_values.begin(), pair_values.end());
        for (double v : pair_values) out.value += v;
        return out;
    }
    const auto& nodes = f.nodes() ? f.nodes() : a.nodes();
    const std::vector<CVec3> vf = f.sample(*nodes);
    const std::vector<CVec3> va = a.sample(*nodes);
    out.method = IntegralMethod::GridSum;
    out.nodes = nodes->size();
    out.value = deterministic_sum(
        nodes->size(),
        [&](std::size_t i) {
            const double kn = norm(nodes->k(i));
            return nodes->weight(i) / kTwoPiCubed * weight(kn) * std::real(hdot(vf[i], va[i]));
        },
        workers);
    return out;
}

IntegralResult to_result(const PairingOut& p) {
    IntegralResult r;
    r.value = p.value;
    r.estimated_error = p.error;
    r.method = p.method;
    r.samples_or_nodes = p.nodes;
    return r;
}

}  // namespace

double RadialWeight::operator()(double k) const {
    switch (trig) {
        case Trig::Cos: return envelope(k) * std::cos(k * frequency);
        case Trig::Sin: return envelope(k) * std::sin(k * frequency);
        default: return envelope(k);
    }
}

double DeltaKernel::spectral_weight(double k, double t) const {
    switch (kind) {
        case DeltaKind::Delta: return std::cos(k * t) / k;
        case DeltaKind::Delta1: return std::sin(k * t) / k;
        case DeltaKind::Delta2: return std::cos(k * t);
        case DeltaKind::dtDelta2: return -k * std::sin(k * t);
        case DeltaKind::dTTDelta: return -k * std::cos(k * t);
    }
    return 0.0;
}

double DeltaKernel::off_cone(double t, double r) const {
    const double g = t * t - r * r;
    if (std::abs(g) <= kConeEpsilon * (t * t + r * r))
        throw ValidationError("delta kernel: point lies on the light cone");
    switch (kind) {
        case DeltaKind::Delta: return -1.0 / (2.0 * kPi * kPi * g);
        case DeltaKind::dTTDelta: return -(3.0 * t * t + r * r) / (kPi * kPi * g * g * g);
        default: return 0.0;
    }
}

IntegralResult weighted_spectral_integral(const SpectralField& sf, int p, unsigned workers) {
    if (p < 0 || p > 2) throw ValidationError("weighted_spectral_integral: power must be 0, 1 or 2");
    require_transverse(sf, "weighted_spectral_integral");
    RadialWeight w{[p](double k) { return p == 0 ? 1.0 : (p == 1 ? k : k * k); }};
    return to_result(pairing_impl(sf, sf, w, workers));
}

double pauli_jordan_delta(double t, double r) {
    if (r < 0.0) throw ValidationError("pauli_jordan_delta: r must be non-negative");
    const double g = t * t - r * r;
    if (std::abs(g) <= kConeEpsilon * (t * t + r * r)) {
        std::ostringstream msg;
        msg << "pauli_jordan_delta: (t, r) = (" << t << ", " << r << ") is on the light cone; the kernel is a distribution there";
        throw ValidationError(msg.str());
    }
    return -1.0 / (2.0 * kPi * kPi * g);
}

IntegralResult pauli_jordan_delta_quadrature(double t, double r, double eta) {
    if (r < 0.0) throw ValidationError("pauli_jordan_delta_quadrature: r must be non-negative");
    if (!(eta > 0.0)) throw ValidationError("pauli_jordan_delta_quadrature: eta must be positive");
    auto integrand = [&](double k) { return k * sph_j(0, k * r) * std::cos(k * t) * std::exp(-eta * k * k); };
    const double k_max = std::sqrt(40.0 / eta);
    const double panel = kPi / (std::abs(t) + r + 1e-300);
    const auto q = quad::panel_tanh_sinh(integrand, 0.0, k_max, std::min(panel, 0.5 / std::sqrt(eta)));
    IntegralResult out;
    out.value = q.value / (2.0 * kPi * kPi);
    out.estimated_error = q.error / (2.0 * kPi * kPi);
    out.samples_or_nodes = q.panels;
    return out;
}

IntegralResult spectral_pairing(const SpectralField& f, const SpectralField& a, const RadialWeight& weight,
                                unsigned workers) {
    return to_result(pairing_impl(f, a, weight, workers));
}

IntegralResult overlap_kernel(const SpectralField& f_o, const SpectralField& a_m, double T, KernelTolerance tol,
                              unsigned workers) {
    if (!(T > 0.0)) throw ValidationError("overlap_kernel: T must be positive");
    require_transverse(f_o, "overlap_kernel");
    require_transverse(a_m, "overlap_kernel");
    const auto p = pairing_impl(f_o, a_m, {[](double k) { return -k; }, RadialWeight::Trig::Cos, T}, workers);
    if (p.method == IntegralMethod::RadialQuadrature) {
        const double allowed = std::max(tol.rel * std::abs(p.value), tol.l1_floor * p.l1);
        if (p.error > allowed) {
            std::ostringstream msg;
            msg << "overlap_kernel: quadrature error estimate " << p.error << " exceeds tolerance " << allowed
                << " at T = " << T;
            throw NumericalError(msg.str());
        }
    }
    return to_result(p);
}

double commutator_residual(const SpectralField& f_o, const SpectralField& a_m, double T, unsigned workers) {
    if (T == 0.0) return 0.0;
    return pairing_impl(f_o, a_m, {[](double k) { return -k; }, RadialWeight::Trig::Sin, T}, workers).value;
}

IntegralResult brute_force_overlap_oracle(const ShapeField& f_o, const ShapeField& a_m, double T,
                                          std::uint64_t samples, std::uint64_t seed, unsigned workers) {
    const Vec3 d = f_o.center() - a_m.center();
    const double dn = norm(d);
    const double margin = kOracleConeMargin * std::max(f_o.sigma(), a_m.sigma());
    const double need = dn + 2.0 * std::max(f_o.effective_radius(), a_m.effective_radius()) + margin;
    if (!(T > need)) {
        std::ostringstream msg;
        msg << "brute_force_overlap_oracle: T = " << T << " must exceed " << need
            << " so that every sampled pair stays off the light cone";
        throw ValidationError(msg.str());
    }
    if (samples < 2) throw ValidationError("brute_force_overlap_oracle: need at least 2 samples");

    IntegralResult out;
    out.method = IntegralMethod::MonteCarlo;
    out.samples_or_nodes = samples;
    out.seed = seed;
    if (f_o.amplitude() == 0.0 || a_m.amplitude() == 0.0) return out;

    const double rho = 0.5 * (T - dn - margin);
    struct Proposal {
        Vec3 center;
        double sigma;
        double log_norm;  // log of the truncated density normalization
    };
    auto proposal = [rho](const ShapeField& f) {
        const double s = f.sigma();
        const double mass = boost::math::gamma_p(1.5, rho * rho / (2.0 * s * s));
        return Proposal{f.center(), s, -1.5 * std::log(2.0 * kPi * s * s) - std::log(mass)};
    };
    const Proposal pf = proposal(f_o), pa = proposal(a_m);

    auto kernel = [T](double r) {
        const double g = T * T - r * r;
        return -(3.0 * T * T + r * r) / (kPi * kPi * g * g * g);
    };
    const double w0 = kernel(0.0);

    constexpr std::uint64_t kBatch = 4096;
    const std::uint64_t batches = (samples + kBatch - 1) / kBatch;
    std::vector<double> sums(batches), squares(batches);
    parallel_for(batches, workers, [&](std::size_t b) {
        RandomStream rng(seed, b);
        auto draw = [&](const Proposal& p, double& log_pdf) {
            for (;;) {
                const Vec3 u{rng.normal(), rng.normal(), rng.normal()};
                const double r2 = norm2(u);
                if (r2 * p.sigma * p.sigma < rho * rho) {
                    log_pdf = p.log_norm - 0.5 * r2;
                    return p.center + p.sigma * u;
                }
            }
        };
        const std::uint64_t n = std::min(kBatch, samples - b * kBatch);
        std::vector<double> vals(n), sq(n);
        for (std::uint64_t i = 0; i < n; ++i) {
            double lx = 0.0, ly = 0.0;
            const Vec3 x = draw(pf, lx);
            const Vec3 y = draw(pa, ly);
            // The constant part of the kernel integrates to zero against
            // zero-mean fields, so subtracting it only removes variance.
            const double v = dot(f_o.value(x), a_m.value(y)) * (kernel(norm(x - y)) - w0) * std::exp(-lx - ly);
            vals[i] = v;
            sq[i] = v * v;
        }
        sums[b] = pairwise_sum(vals);
        squares[b] = pairwise_sum(sq);
    });
    const double N = static_cast<double>(samples);
    const double mean = pairwise_sum(sums) / N;
    const double var = std::max(0.0, (pairwise_sum(squares) / N - mean * mean) * N / (N - 1.0));
    out.value = mean;
    out.estimated_error = std::sqrt(var / N);
    return out;
}

}  // namespace qet
