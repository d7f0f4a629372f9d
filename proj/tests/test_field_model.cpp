#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "oracles.hpp"
#include "qet/errors.hpp"
#include "qet/field_model.hpp"
#include "qet/spectral_engine.hpp"

using namespace qet;

namespace {

Vec3 v3(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }

// Fourier transform of a(x) by the trapezoid rule: \int a e^{-ik.x} d^3x.
CVec3 numeric_transform(const oracle::CurlGaussianRef& f, const Vec3& k) {
    CVec3 acc{};
    const int m = 32;
    const double h = f.s / 4.0;
    for (int i = -m; i <= m; ++i)
        for (int j = -m; j <= m; ++j)
            for (int l = -m; l <= m; ++l) {
                const std::array<double, 3> x{f.c[0] + i * h, f.c[1] + j * h, f.c[2] + l * h};
                const auto a = f.value(x);
                const Complex ph = std::polar(1.0, -(k.x * x[0] + k.y * x[1] + k.z * x[2]));
                acc += CVec3{a[0] * ph, a[1] * ph, a[2] * ph};
            }
    return acc * Complex(h * h * h, 0.0);
}

// Nodes at center + h (i - n/2), the layout of a lattice centered on the field.
VectorGrid sample_grid(const ShapeField& f, std::size_t n, double h) {
    VectorGrid g;
    g.dims = {n, n, n};
    g.spacing = h;
    const double half = h * static_cast<double>(n / 2);
    g.origin = f.center() - Vec3{half, half, half};
    g.values.resize(g.size());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) g.values[g.index(i, j, k)] = f.value(g.node(i, j, k));
    return g;
}

}  // namespace

TEST_CASE("curl-Gaussian construction rejects invalid parameters") {
    CHECK_THROWS_AS(make_curl_gaussian(1.0, 0.0, {}, {0, 0, 1}), ValidationError);
    CHECK_THROWS_AS(make_curl_gaussian(1.0, -1.0, {}, {0, 0, 1}), ValidationError);
    CHECK_THROWS_AS(make_curl_gaussian(1.0, 1.0, {}, {0, 0, 2}), ValidationError);
    CHECK_THROWS_AS(make_curl_gaussian(1.0, 1.0, {}, {0, 0, 0}), ValidationError);
    CHECK_NOTHROW(make_curl_gaussian(1.0, 1.0, {}, {0, 0, 1}));
}

TEST_CASE("curl-Gaussian values and curl match the independent formulas") {
    oracle::Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        oracle::CurlGaussianRef ref;
        ref.A = rng.uniform(-2.0, 2.0);
        ref.s = rng.uniform(0.3, 3.0);
        ref.c = {rng.normal(), rng.normal(), rng.normal()};
        ref.n = rng.unit_vector();
        const auto f = make_curl_gaussian(ref.A, ref.s, v3(ref.c), v3(ref.n));
        for (int p = 0; p < 10; ++p) {
            const std::array<double, 3> x{ref.c[0] + ref.s * rng.normal(), ref.c[1] + ref.s * rng.normal(),
                                          ref.c[2] + ref.s * rng.normal()};
            const Vec3 a = f.value(v3(x)), b = f.curl(v3(x));
            const Vec3 ea = v3(ref.value(x)), eb = v3(ref.curl(x));
            const double scale = std::abs(ref.A) / (ref.s * ref.s);
            CHECK(norm(a - ea) <= 1e-13 * scale * ref.s + 1e-300);
            CHECK(norm(b - eb) <= 1e-13 * scale + 1e-300);
        }
    }
}

TEST_CASE("effective radius holds all but the tail tolerance of the L2 mass") {
    // Radial density of |a|^2 is r^4 exp(-r^2/s^2); integrate the tail directly.
    auto tail = [](double R) {
        const int n = 200000;
        const double hi = 12.0, h = (hi - R) / n;
        double t = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double r = R + i * h;
            t += (i == 0 || i == n ? 0.5 : 1.0) * std::pow(r, 4) * std::exp(-r * r);
        }
        return t * h / (3.0 * std::sqrt(oracle::pi) / 8.0);
    };
    const double R = curl_gaussian_effective_radius(1.0);
    CHECK(tail(R) == doctest::Approx(kTailTol).epsilon(1e-6));
    CHECK(curl_gaussian_effective_radius(2.5) == doctest::Approx(2.5 * R).epsilon(1e-14));
    CHECK(make_curl_gaussian(1.0, 2.0, {}, {1, 0, 0}).effective_radius() == doctest::Approx(2.0 * R));
}

TEST_CASE("closed-form transform matches direct quadrature of the position profile") {
    oracle::CurlGaussianRef ref;
    ref.A = 0.7;
    ref.s = 1.3;
    ref.c = {0.4, -0.2, 0.9};
    ref.n = {0.0, 0.6, 0.8};
    const CurlGaussian cg{ref.A, ref.s, v3(ref.c), v3(ref.n)};
    for (const Vec3 k : {Vec3{0.3, 0.1, -0.5}, Vec3{1.2, -0.7, 0.4}, Vec3{0.0, 0.0, 2.0}}) {
        const CVec3 got = curl_gaussian_transform(cg, k);
        const CVec3 want = numeric_transform(ref, k);
        CHECK(norm(got - want) <= 1e-10 * norm(want));
    }
}

TEST_CASE("spectral L2 norm agrees with position space (Parseval)") {
    oracle::CurlGaussianRef ref;
    ref.A = 1.0;
    ref.s = 1.0;
    const auto f = make_curl_gaussian(1.0, 1.0, {}, {0, 0, 1});
    const double spectral = weighted_spectral_integral(spectral_transform(f), 0).value;
    CHECK(spectral == doctest::Approx(oracle::l2_norm2(ref)).epsilon(1e-10));
    CHECK(spectral == doctest::Approx(oracle::spectral_moment(0)).epsilon(1e-12));
}

TEST_CASE("spectral invariants: transversality, Hermitian symmetry, no zero mode") {
    const auto f = make_curl_gaussian(1.0, 1.0, {0.3, 0, 0}, {0, 1, 0});
    const auto closed = check_spectral_invariants(spectral_transform(f));
    CHECK(closed.max_longitudinal == 0.0);
    const auto lat = check_spectral_invariants(spectral_transform(f, GridSpec{32, 8.0}));
    CHECK(lat.max_longitudinal < 1e-12);
    CHECK(lat.max_hermitian_defect < 1e-12);
    CHECK(lat.zero_mode < 1e-12);
}

TEST_CASE("spectral_transform rejects under-resolved or undersized lattices") {
    const auto f = make_curl_gaussian(1.0, 1.0, {}, {0, 0, 1});
    CHECK_THROWS_AS(spectral_transform(f, GridSpec{64, 2.0}), ValidationError);  // k_max sigma < 4
    CHECK_THROWS_AS(spectral_transform(f, GridSpec{8, 8.0}), ValidationError);   // box < 2R
}

TEST_CASE("grid-sampled field: moment sigma, discrete transform and round trip") {
    const auto cg = make_curl_gaussian(1.0, 1.0, {0.1, 0.2, -0.1}, {0, 0, 1});
    const double h = 0.25;
    const auto grid = sample_grid(cg, 56, h);
    const auto f = make_grid_field(grid);
    CHECK(f.family() == FieldFamily::GridSampled);
    CHECK(f.sigma() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(norm(f.center() - cg.center()) < 1e-6);
    CHECK(check_divergence_free(f).pass);

    // Discrete transform against the closed form on the same k lattice.
    const GridSpec spec{56, oracle::pi / h};
    const auto sf = spectral_transform(f, spec);
    const auto sc = spectral_transform(cg, spec);
    double worst = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < sf.values().size(); ++i) {
        worst = std::max(worst, norm(sf.values()[i] - sc.values()[i]));
        peak = std::max(peak, norm(sc.values()[i]));
    }
    CHECK(worst < 1e-6 * peak);

    const VectorGrid back = inverse_transform(sc);
    double err = 0.0;
    for (std::size_t i = 0; i < back.values.size(); ++i)
        err = std::max(err, norm(back.values[i] - cg.value(back.node(i / (56 * 56), (i / 56) % 56, i % 56))));
    CHECK(err < 1e-8);
}

TEST_CASE("divergence check flags a longitudinal field") {
    VectorGrid g;
    const std::size_t n = 40;
    g.dims = {n, n, n};
    g.spacing = 0.25;
    g.origin = {-4.875, -4.875, -4.875};
    g.values.resize(g.size());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                const Vec3 x = g.node(i, j, k);
                g.values[g.index(i, j, k)] = std::exp(-dot(x, x) / 2.0) * x;  // gradient of a Gaussian
            }
    const auto f = make_grid_field(g, 1.0);
    const auto rep = check_divergence_free(f);
    CHECK_FALSE(rep.pass);
    CHECK(rep.max_residual > rep.threshold);
}

TEST_CASE("grid field CSV loads and rejects malformed rows") {
    const auto cg = make_curl_gaussian(1.0, 1.0, {}, {1, 0, 0});
    const auto grid = sample_grid(cg, 36, 0.35);
    const auto dir = std::filesystem::temp_directory_path() / "qet_field_csv";
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "f.csv");
        out.precision(17);
        out << "x,y,z,fx,fy,fz\n";
        for (std::size_t i = 0; i < 36; ++i)
            for (std::size_t j = 0; j < 36; ++j)
                for (std::size_t k = 0; k < 36; ++k) {
                    const Vec3 x = grid.node(i, j, k), v = grid.values[grid.index(i, j, k)];
                    out << x.x << ',' << x.y << ',' << x.z << ',' << v.x << ',' << v.y << ',' << v.z << '\n';
                }
    }
    const auto f = load_grid_field_csv(dir / "f.csv");
    CHECK(f.grid()->dims[0] == 36);
    CHECK(f.grid()->spacing == doctest::Approx(0.35));
    CHECK(norm(f.value({0.2, 0.1, -0.3}) - grid.interpolate({0.2, 0.1, -0.3})) < 1e-12);
    {
        std::ofstream out(dir / "bad.csv");
        out << "0,0,0,1,2\n";
    }
    CHECK_THROWS_AS(load_grid_field_csv(dir / "bad.csv"), Error);
    CHECK_THROWS_AS(load_grid_field_csv(dir / "missing.csv"), IoError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("window function is one inside, zero beyond twice the radius") {
    const WindowFunction w({1, 0, 0}, 2.0);
    CHECK(w.value({1, 0, 0}) == 1.0);
    CHECK(w.value({2.9, 0, 0}) == 1.0);
    CHECK(w.value({4.0, 0, 0}) == doctest::Approx(0.5));
    CHECK(w.value({5.1, 0, 0}) == 0.0);
    CHECK_THROWS_AS(WindowFunction({}, 0.0), ValidationError);
}

TEST_CASE("scaling a field scales its spectrum linearly") {
    const auto f = make_curl_gaussian(1.0, 1.0, {}, {0, 0, 1});
    const double base = weighted_spectral_integral(spectral_transform(f), 2).value;
    for (double l : {0.0, 0.3, 2.0, -1.5})
        CHECK(weighted_spectral_integral(spectral_transform(f.scaled(l)), 2).value ==
              doctest::Approx(l * l * base).epsilon(1e-13));
}
