#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "qet/errors.hpp"
#include "qet/field_model.hpp"
#include "qet/spectral_engine.hpp"

using namespace qet;

namespace {

SpectralField unit_field(double sigma = 1.0, Vec3 center = {}, Vec3 axis = {0, 0, 1}, double A = 1.0) {
    return spectral_transform(make_curl_gaussian(A, sigma, center, axis));
}

}  // namespace

TEST_CASE("overlap kernel reproduces the high-precision reference for co-located probes") {
    const auto f = unit_field();
    for (const auto& ref : oracle::kernel_reference()) {
        const auto k = overlap_kernel(f, f, ref.T);
        const double tol = ref.T <= 105.0 ? 1e-8 : 1e-5;
        CAPTURE(ref.T);
        CHECK(k.value == doctest::Approx(ref.K).epsilon(tol));
        CHECK(k.method == IntegralMethod::RadialQuadrature);
    }
    const auto f2 = unit_field(2.0);
    CHECK(overlap_kernel(f2, f2, 30.0).value == doctest::Approx(oracle::kKernelSigma2T30).epsilon(1e-8));
}

TEST_CASE("overlap kernel approaches its 1/T^6 asymptote") {
    const auto f = unit_field();
    const double r100 = overlap_kernel(f, f, 100.0).value / oracle::kernel_asymptote(100.0);
    const double r200 = overlap_kernel(f, f, 200.0).value / oracle::kernel_asymptote(200.0);
    CHECK(std::abs(r200 - 1.0) < 0.01);
    CHECK(std::abs(r200 - 1.0) < std::abs(r100 - 1.0));
}

TEST_CASE("spectral moments of curl-Gaussians match closed forms") {
    oracle::Rng rng(21);
    for (int trial = 0; trial < 25; ++trial) {
        const double A = rng.uniform(0.1, 3.0), s = rng.uniform(0.3, 3.0);
        const auto n = rng.unit_vector();
        const auto f = unit_field(s, {rng.normal(), rng.normal(), rng.normal()}, {n[0], n[1], n[2]}, A);
        for (int p = 0; p <= 2; ++p)
            CHECK(weighted_spectral_integral(f, p).value == doctest::Approx(oracle::spectral_moment(p, A, s)).epsilon(1e-12));
    }
    CHECK(weighted_spectral_integral(unit_field(), 1).value == doctest::Approx(8.0 * oracle::pi / 3.0).epsilon(1e-14));
}

TEST_CASE("kernel is symmetric and bilinear in the two profiles") {
    oracle::Rng rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a_axis = rng.unit_vector(), f_axis = rng.unit_vector();
        const Vec3 d{rng.normal(), rng.normal(), rng.normal()};
        const auto a = unit_field(1.0, {}, {a_axis[0], a_axis[1], a_axis[2]});
        const auto f = unit_field(1.2, d, {f_axis[0], f_axis[1], f_axis[2]});
        const double T = 25.0;
        const double k = overlap_kernel(f, a, T).value;
        CHECK(overlap_kernel(a, f, T).value == doctest::Approx(k).epsilon(1e-10));
        CHECK(overlap_kernel(f, a.scaled(-2.5), T).value == doctest::Approx(-2.5 * k).epsilon(1e-10));
    }
}

TEST_CASE("closed-form pairing is independent of term order") {
    const CurlGaussian g1{1.0, 1.0, {0.5, 0, 0}, {0, 0, 1}};
    const CurlGaussian g2{-0.4, 1.5, {0, 0.7, 0}, {0.6, 0.8, 0}};
    const CurlGaussian g3{0.9, 0.8, {0, 0, -0.3}, {1, 0, 0}};
    const auto f = SpectralField::closed_form({g1});
    const auto a = SpectralField::closed_form({g1, g2, g3});
    const auto b = SpectralField::closed_form({g3, g1, g2});
    CHECK(overlap_kernel(f, a, 30.0).value == overlap_kernel(f, b, 30.0).value);
    CHECK(weighted_spectral_integral(a, 1).value == weighted_spectral_integral(b, 1).value);
}

TEST_CASE("lattice sums agree with radial quadrature for smooth weights") {
    const auto cg = make_curl_gaussian(1.0, 1.0, {}, {0, 1, 0});
    const auto lat = spectral_transform(cg, GridSpec{48, 8.0});
    CHECK(weighted_spectral_integral(lat, 0).value == doctest::Approx(oracle::spectral_moment(0)).epsilon(1e-8));
    CHECK(weighted_spectral_integral(lat, 2).value == doctest::Approx(oracle::spectral_moment(2)).epsilon(1e-8));
    // |k| has a cusp at the origin, so the lattice sum converges only algebraically.
    CHECK(weighted_spectral_integral(lat, 1).value == doctest::Approx(oracle::spectral_moment(1)).epsilon(1e-4));
}

TEST_CASE("commutator residual vanishes once the supports are causally separated") {
    const auto f = unit_field();
    CHECK(std::abs(commutator_residual(f, f, 20.0)) < 1e-14);
    CHECK(commutator_residual(f, f, 0.0) == 0.0);
    // Inside the light cone the commutator is not zero.
    CHECK(std::abs(commutator_residual(f, f, 1.0)) > 1e-2);
}

TEST_CASE("Pauli-Jordan function: closed form, regulated integral and derivatives") {
    CHECK(pauli_jordan_delta(2.0, 1.0) == doctest::Approx(-1.0 / (2.0 * oracle::pi * oracle::pi * 3.0)));
    CHECK(pauli_jordan_delta_quadrature(2.0, 1.0).value == doctest::Approx(pauli_jordan_delta(2.0, 1.0)).epsilon(1e-5));
    CHECK(pauli_jordan_delta_quadrature(0.5, 1.5).value == doctest::Approx(pauli_jordan_delta(0.5, 1.5)).epsilon(1e-5));
    CHECK_THROWS_AS(pauli_jordan_delta(1.0, 1.0), ValidationError);

    // d^2/dt^2 of the closed form by central differences.
    const DeltaKernel tt{DeltaKind::dTTDelta};
    for (const auto& [t, r] : {std::pair{3.0, 1.0}, std::pair{0.4, 2.0}, std::pair{10.0, 0.5}}) {
        const double h = 1e-3 * t;
        const double fd = (pauli_jordan_delta(t + h, r) - 2.0 * pauli_jordan_delta(t, r) + pauli_jordan_delta(t - h, r)) / (h * h);
        CHECK(tt.off_cone(t, r) == doctest::Approx(fd).epsilon(1e-5));
    }
    for (auto kind : {DeltaKind::Delta1, DeltaKind::Delta2, DeltaKind::dtDelta2})
        CHECK(DeltaKernel{kind}.off_cone(3.0, 1.0) == 0.0);
    CHECK(DeltaKernel{DeltaKind::dTTDelta}.spectral_weight(2.0, 0.7) == doctest::Approx(-2.0 * std::cos(1.4)));
}

TEST_CASE("Monte Carlo oracle agrees with the spectral kernel and is reproducible") {
    const auto f = make_curl_gaussian(1.0, 1.0, {}, {0, 0, 1});
    const double T = 20.0;
    const double k = overlap_kernel(spectral_transform(f), spectral_transform(f), T).value;
    const auto mc = brute_force_overlap_oracle(f, f, T, 200000, 5);
    CHECK(mc.method == IntegralMethod::MonteCarlo);
    CHECK(mc.samples_or_nodes == 200000);
    CHECK(std::abs(mc.value - k) < 3.0 * mc.estimated_error);
    const auto again = brute_force_overlap_oracle(f, f, T, 200000, 5, 4);
    CHECK(again.value == mc.value);
    CHECK(again.estimated_error == mc.estimated_error);
    CHECK(brute_force_overlap_oracle(f, f, T, 200000, 6).value != mc.value);
    CHECK_THROWS_AS(brute_force_overlap_oracle(f, f, 10.0, 1000, 1), ValidationError);
}

TEST_CASE("overlap kernel enforces its error contract") {
    const auto f = unit_field();
    CHECK_THROWS_AS(overlap_kernel(f, f, 20.0, KernelTolerance{1e-30, 1e-300}), NumericalError);
}
