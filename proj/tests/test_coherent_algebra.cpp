#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "qet/coherent_algebra.hpp"
#include "qet/negative_energy.hpp"
#include "qet/spectral_engine.hpp"

using namespace qet;

namespace {

SpectralField cg(double A, double s, Vec3 c, Vec3 n) { return SpectralField::closed_form({CurlGaussian{A, s, c, n}}); }

CoherentLabel random_label(oracle::Rng& rng) {
    auto axis = [&] {
        const auto u = rng.unit_vector();
        return Vec3{u[0], u[1], u[2]};
    };
    auto center = [&] { return Vec3{rng.normal(), rng.normal(), rng.normal()}; };
    return {cg(rng.uniform(-0.5, 0.5), rng.uniform(0.7, 1.5), center(), axis()),
            cg(rng.uniform(-0.5, 0.5), rng.uniform(0.7, 1.5), center(), axis())};
}

// Two explicit k nodes, one polarization each, with scalar label amplitudes.
struct TwoNodeSetup {
    std::vector<DiscreteMode> modes;
    std::shared_ptr<const KNodes> nodes;

    TwoNodeSetup() {
        modes = {{{0.3, -0.2, 1.1}, {}, 0.8}, {{-0.9, 0.4, 0.5}, {}, 1.3}};
        for (auto& m : modes) {
            const Vec3 hint{0.2, 1.0, -0.4};
            const Vec3 kh = m.k * (1.0 / norm(m.k));
            const Vec3 e = hint - dot(hint, kh) * kh;
            m.polarization = e * (1.0 / norm(e));
        }
        nodes = KNodes::explicit_nodes({modes[0].k, modes[1].k}, {modes[0].weight, modes[1].weight});
    }

    CoherentLabel label(Complex p0, Complex p1, Complex q0, Complex q1) const {
        auto field = [&](Complex a, Complex b) {
            return SpectralField::on_nodes(nodes, {to_complex(modes[0].polarization) * a, to_complex(modes[1].polarization) * b});
        };
        return {field(p0, p1), field(q0, q1)};
    }

    // U = exp(i sum_j (beta_j b_j + h.c.)), beta_j = c_j conj(e_j . (P - i|k|Q)).
    Eigen::MatrixXcd displacement(const FockSpace& space, const CoherentLabel& l) const {
        const auto P = l.p.sample(*nodes), Q = l.q.sample(*nodes);
        std::vector<Complex> beta;
        for (std::size_t j = 0; j < 2; ++j) {
            const double kn = norm(modes[j].k);
            const Complex alpha = bdot(modes[j].polarization, P[j] - Q[j] * Complex(0.0, kn));
            beta.push_back(modes[j].normalization() * std::conj(alpha));
        }
        return hermitian_function(fock_linear_field(space, beta), [](double x) { return std::polar(1.0, x); });
    }
};

}  // namespace

TEST_CASE("coherent states are normalized and the overlap is Hermitian") {
    oracle::Rng rng(31);
    for (int i = 0; i < 10; ++i) {
        const auto a = random_label(rng), b = random_label(rng);
        CHECK(std::abs(coherent_inner_product(a, a) - 1.0) < 1e-13);
        const Complex ab = coherent_inner_product(a, b), ba = coherent_inner_product(b, a);
        CHECK(std::abs(ab - std::conj(ba)) < 1e-13);
        CHECK(std::abs(ab) <= 1.0 + 1e-14);
    }
}

TEST_CASE("vacuum overlap of an A-displacement is exp(-I1(q)/4)") {
    const auto q = cg(0.8, 1.2, {0.5, 0, 0}, {0, 1, 0});
    const double I1 = oracle::spectral_moment(1, 0.8, 1.2);
    const Complex o = coherent_inner_product(CoherentLabel::vacuum(), {SpectralField{}, q});
    CHECK(o.real() == doctest::Approx(std::exp(-I1 / 4.0)).epsilon(1e-12));
    CHECK(std::abs(o.imag()) < 1e-15);
}

TEST_CASE("inner product factorizes through the composition law") {
    // <l1|l2> = <0|U(-l1) U(l2)|0> = phase(-l1, l2) <0|l2 - l1>
    oracle::Rng rng(32);
    for (int i = 0; i < 10; ++i) {
        const auto a = random_label(rng), b = random_label(rng);
        const auto comp = displacement_composition_phase(-a, b);
        const Complex via = comp.phase * coherent_inner_product(CoherentLabel::vacuum(), comp.combined);
        CHECK(std::abs(via - coherent_inner_product(a, b)) < 1e-13);
        const Complex reverse = displacement_composition_phase(b, a).phase;
        CHECK(std::abs(displacement_composition_phase(a, b).phase * reverse - 1.0) < 1e-14);
    }
}

TEST_CASE("coherent algebra matches explicit Fock-space displacements") {
    const TwoNodeSetup setup;
    // Amplitudes sized so that |<b_j>| ~ 0.3 in each mode, well inside the cutoff.
    const FockSpace space(2, 20);
    const auto l1 = setup.label({6.0, -2.0}, {-4.0, 5.0}, {3.0, 1.0}, {2.0, -4.0});
    const auto l2 = setup.label({-2.0, 4.0}, {2.0, 1.0}, {-5.0, 2.0}, {1.0, 3.0});
    const Eigen::VectorXcd vac = space.vacuum();
    const Eigen::MatrixXcd U1 = setup.displacement(space, l1), U2 = setup.displacement(space, l2);

    const Complex fock_overlap = (U1 * vac).dot(U2 * vac);
    const Complex lib_overlap = coherent_inner_product(l1, l2);
    CHECK(std::abs(lib_overlap) < 0.99);  // the labels are far enough apart to test the phase
    CHECK(std::abs(std::arg(lib_overlap)) > 1e-3);
    CHECK(std::abs(fock_overlap - lib_overlap) < 1e-11);

    const auto comp = displacement_composition_phase(l1, l2);
    const Eigen::VectorXcd lhs = U1 * (U2 * vac);
    const Eigen::VectorXcd rhs = comp.phase * (setup.displacement(space, comp.combined) * vac);
    CHECK((lhs - rhs).norm() < 1e-11);

    // <E(x)> in the displaced state.
    const Vec3 x{0.4, -0.3, 0.8};
    Vec3 fock_E{};
    const Eigen::VectorXcd psi = U1 * vac;
    for (std::size_t j = 0; j < 2; ++j) {
        const CVec3 u = setup.modes[j].electric(x);
        const Complex bj = psi.dot(space.annihilation(j) * psi);
        fock_E += 2.0 * real(u * bj);
    }
    const Vec3 lib_E = mean_electric_field(l1, x, *setup.nodes);
    CHECK(norm(lib_E - fock_E) < 1e-12);
}

TEST_CASE("lattice route agrees with the closed form") {
    const auto q1 = make_curl_gaussian(0.4, 1.0, {}, {0, 0, 1});
    const auto q2 = make_curl_gaussian(-0.3, 1.0, {0.5, 0, 0}, {1, 0, 0});
    const CoherentLabel c1{SpectralField{}, spectral_transform(q1)}, c2{SpectralField{}, spectral_transform(q2)};
    const GridSpec spec{48, 8.0};
    const auto s1 = spectral_transform(q1, spec), s2 = spectral_transform(q2, spec);
    const auto zero = s1.scaled(0.0);
    const CoherentLabel g1{zero, s1}, g2{zero, s2};
    const Complex closed = coherent_inner_product(c1, c2), lattice = coherent_inner_product(g1, g2);
    // The Gaussian factor carries a |k| weight, which the lattice sum resolves to ~1e-5.
    CHECK(std::abs(std::log(std::abs(lattice)) - std::log(std::abs(closed))) < 1e-4);
    CHECK(std::abs(std::arg(lattice) - std::arg(closed)) < 1e-10);
}

TEST_CASE("position pairing is Parseval's integral") {
    const auto a = cg(1.0, 1.0, {}, {0, 0, 1});
    CHECK(position_pairing(a, a) == doctest::Approx(oracle::spectral_moment(0)).epsilon(1e-12));
    const auto b = cg(1.0, 1.0, {}, {1, 0, 0});
    CHECK(std::abs(position_pairing(a, b)) < 1e-14);
}
