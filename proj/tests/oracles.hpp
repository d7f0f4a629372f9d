#pragma once

// Reference values computed without the engine: closed forms, position-space
// quadrature on a plain lattice, and high-precision values frozen from an
// arbitrary-precision evaluation of the same closed forms.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace oracle {

constexpr double pi = std::numbers::pi;

// Unit curl-Gaussian, center c, axis n: a = (A psi / s^2) (n x u),
// curl a = A psi [(n.u) u / s^4 - n (|u|^2/s^4 - 2/s^2)], psi = exp(-|u|^2/(2 s^2)).
struct CurlGaussianRef {
    double A = 1.0, s = 1.0;
    std::array<double, 3> c{0, 0, 0}, n{0, 0, 1};

    std::array<double, 3> value(const std::array<double, 3>& x) const {
        const double u[3] = {x[0] - c[0], x[1] - c[1], x[2] - c[2]};
        const double psi = std::exp(-(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]) / (2 * s * s));
        const double f = A * psi / (s * s);
        return {f * (n[1] * u[2] - n[2] * u[1]), f * (n[2] * u[0] - n[0] * u[2]), f * (n[0] * u[1] - n[1] * u[0])};
    }
    std::array<double, 3> curl(const std::array<double, 3>& x) const {
        const double u[3] = {x[0] - c[0], x[1] - c[1], x[2] - c[2]};
        const double r2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
        const double psi = std::exp(-r2 / (2 * s * s));
        const double s2 = s * s, s4 = s2 * s2;
        const double nu = n[0] * u[0] + n[1] * u[1] + n[2] * u[2];
        std::array<double, 3> b{};
        for (int i = 0; i < 3; ++i) b[i] = A * psi * (nu * u[i] / s4 - n[i] * (r2 / s4 - 2 / s2));
        return b;
    }
};

// Trapezoid rule of g(x) over the cube c +- 8 s with spacing s/4. The
// integrands decay like exp(-r^2/s^2), so the truncation error is far below
// double precision and the rule is spectrally accurate.
template <class G>
double lattice_integral(const CurlGaussianRef& f, G g) {
    const int m = 32;
    const double h = f.s / 4.0;
    double total = 0.0;
    for (int i = -m; i <= m; ++i) {
        double plane = 0.0;
        for (int j = -m; j <= m; ++j) {
            double line = 0.0;
            for (int k = -m; k <= m; ++k) line += g({f.c[0] + i * h, f.c[1] + j * h, f.c[2] + k * h});
            plane += line;
        }
        total += plane;
    }
    return total * h * h * h;
}

// 1/2 \int |curl a|^2
inline double input_energy(const CurlGaussianRef& f) {
    return 0.5 * lattice_integral(f, [&](const std::array<double, 3>& x) {
        const auto b = f.curl(x);
        return b[0] * b[0] + b[1] * b[1] + b[2] * b[2];
    });
}

// \int |a|^2
inline double l2_norm2(const CurlGaussianRef& f) {
    return lattice_integral(f, [&](const std::array<double, 3>& x) {
        const auto v = f.value(x);
        return v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    });
}

// Spectral moments of a unit-amplitude curl-Gaussian:
// \int d^3k/(2pi)^3 |k|^p |a~|^2 = (8 pi / 3) A^2 s^{1-p} \int_0^inf x^{4+p} e^{-x^2} dx.
inline double spectral_moment(int p, double A = 1.0, double s = 1.0) {
    return (8.0 * pi / 3.0) * A * A * std::pow(s, 1 - p) * 0.5 * std::tgamma((5.0 + p) / 2.0);
}

// Co-located, co-axial unit curl-Gaussians of equal width:
// K(T) = -(8 pi / 3) 1F1(3; 1/2; -T^2 / (4 s^2)). Values at s = 1 from a
// 40-digit evaluation.
struct KernelRef {
    double T;
    double K;
};
inline const std::vector<KernelRef>& kernel_reference() {
    static const std::vector<KernelRef> v = {
        {12.0, 4.6810126690195189826e-4},  {14.0, 1.6861456247976386013e-4}, {20.0, 1.7520830684722672953e-5},
        {40.0, 2.5202801174453745138e-7},  {70.0, 8.6187759748535975143e-9}, {105.0, 7.5304472057644760093e-10},
        {150.0, 8.8422648852613215536e-11}, {200.0, 1.5724471487025904793e-11},
    };
    return v;
}
// s = 2, T = 30.
inline constexpr double kKernelSigma2T30 = 1.0788987735900791288e-4;

// Large-T asymptote of the same kernel at s = 1.
inline double kernel_asymptote(double T) { return 320.0 * pi / std::pow(T, 6); }

// Minimum of <Psi|eps|Psi> over cos(t)|0> + e^{id} sin(t)|2>.
inline double superposition_minimum(double A, double absB) {
    return -0.5 * (std::sqrt(A * A + 4.0 * absB * absB) - A);
}

// Deterministic generator for property tests.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed * 0x9E3779B97F4A7C15ULL + 0x2545F4914F6CDD1DULL) {}
    std::uint64_t next() {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545F4914F6CDD1DULL;
    }
    double uniform(double lo = 0.0, double hi = 1.0) {
        return lo + (hi - lo) * (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }
    double normal() {
        const double u1 = uniform(), u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
    }
    std::array<double, 3> unit_vector() {
        for (;;) {
            std::array<double, 3> v{normal(), normal(), normal()};
            const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
            if (r > 1e-3) return {v[0] / r, v[1] / r, v[2] / r};
        }
    }

private:
    std::uint64_t state_;
};

}  // namespace oracle
