#include "qet/coherent_algebra.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "qet/reduction.hpp"
#include "qet/spectral_engine.hpp"

namespace qet {

namespace {

constexpr double kTwoPiCubed = 8.0 * std::numbers::pi * std::numbers::pi * std::numbers::pi;

bool all_closed(std::initializer_list<const SpectralField*> fields) {
    for (const auto* f : fields)
        if (f->representation() != SpectralRepresentation::ClosedForm) return false;
    return true;
}

const KNodes* first_nodes(std::initializer_list<const SpectralField*> fields) {
    for (const auto* f : fields)
        if (f->nodes()) return f->nodes().get();
    return nullptr;
}

}  // namespace

CoherentLabel operator+(const CoherentLabel& a, const CoherentLabel& b) { return {a.p + b.p, a.q + b.q}; }
CoherentLabel operator-(const CoherentLabel& a) { return {a.p.scaled(-1.0), a.q.scaled(-1.0)}; }

double position_pairing(const SpectralField& p, const SpectralField& q) {
    return spectral_pairing(p, q, RadialWeight{[](double) { return 1.0; }}).value;
}

namespace {

struct BargmannSums {
    double im = 0.0;     // sum c^2 Im(alpha1^* . alpha2)
    double gauss = 0.0;  // sum c^2 |alpha1 - alpha2|^2
};

// Per node: alpha = P - i|k|Q with weight c^2 = w / ((2pi)^3 2|k|).
BargmannSums bargmann_sums(const CoherentLabel& l1, const CoherentLabel& l2) {
    const KNodes& nodes = *first_nodes({&l1.p, &l1.q, &l2.p, &l2.q});
    const auto p1 = l1.p.sample(nodes), q1 = l1.q.sample(nodes);
    const auto p2 = l2.p.sample(nodes), q2 = l2.q.sample(nodes);
    auto alpha = [](const CVec3& P, const CVec3& Q, double kn) { return P - Q * Complex(0.0, kn); };
    BargmannSums out;
    out.im = deterministic_sum(nodes.size(), [&](std::size_t i) {
        const double kn = norm(nodes.k(i));
        if (kn == 0.0) return 0.0;
        const double c2 = nodes.weight(i) / (kTwoPiCubed * 2.0 * kn);
        return c2 * std::imag(hdot(alpha(p1[i], q1[i], kn), alpha(p2[i], q2[i], kn)));
    });
    out.gauss = deterministic_sum(nodes.size(), [&](std::size_t i) {
        const double kn = norm(nodes.k(i));
        if (kn == 0.0) return 0.0;
        const double c2 = nodes.weight(i) / (kTwoPiCubed * 2.0 * kn);
        return c2 * norm2(alpha(p1[i], q1[i], kn) - alpha(p2[i], q2[i], kn));
    });
    return out;
}

}  // namespace

Complex coherent_inner_product(const CoherentLabel& l1, const CoherentLabel& l2) {
    if (all_closed({&l1.p, &l1.q, &l2.p, &l2.q})) {
        const double phase = -0.5 * (position_pairing(l1.p, l2.q) - position_pairing(l1.q, l2.p));
        const SpectralField dP = l2.p - l1.p;
        const SpectralField dQ = l2.q - l1.q;
        // The cross term 2|k| Im(dP^* . dQ) integrates to zero for real profiles.
        const double gauss = 0.5 * spectral_pairing(dP, dP, RadialWeight{[](double k) { return 0.5 / k; }}).value +
                             0.5 * spectral_pairing(dQ, dQ, RadialWeight{[](double k) { return 0.5 * k; }}).value;
        return std::exp(-gauss) * std::polar(1.0, phase);
    }
    const auto s = bargmann_sums(l1, l2);
    return std::exp(-0.5 * s.gauss) * std::polar(1.0, s.im);
}

Composition displacement_composition_phase(const CoherentLabel& l1, const CoherentLabel& l2) {
    if (all_closed({&l1.p, &l1.q, &l2.p, &l2.q})) {
        const double phase = 0.5 * (position_pairing(l1.p, l2.q) - position_pairing(l1.q, l2.p));
        return {std::polar(1.0, phase), l1 + l2};
    }
    return {std::polar(1.0, -bargmann_sums(l1, l2).im), l1 + l2};
}

Vec3 mean_electric_field(const CoherentLabel& label, const Vec3& x, const KNodes& nodes) {
    const auto P = label.p.sample(nodes);
    const auto Q = label.q.sample(nodes);
    Vec3 out{};
    for (int d = 0; d < 3; ++d) {
        out[d] = deterministic_sum(nodes.size(), [&](std::size_t i) {
            const Vec3 k = nodes.k(i);
            const double kn = norm(k);
            if (kn == 0.0) return 0.0;
            const CVec3 a = transverse_project(k, P[i] - Q[i] * Complex(0.0, kn));
            return nodes.weight(i) / kTwoPiCubed * std::real(a[d] * std::polar(1.0, dot(k, x)));
        });
    }
    return out;
}

}  // namespace qet
