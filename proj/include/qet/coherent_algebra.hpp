#pragma once

#include "qet/field_model.hpp"
#include "qet/vec3.hpp"

namespace qet {

// Displacement label of U(p, q) = exp(i \int (p.A - q.E) d^3x), which shifts
// E by p and A by q. Both profiles are held spectrally.
struct CoherentLabel {
    SpectralField p;
    SpectralField q;

    static CoherentLabel vacuum() { return {}; }
};

CoherentLabel operator+(const CoherentLabel& a, const CoherentLabel& b);
CoherentLabel operator-(const CoherentLabel& a);

// \int p(x).q(x) d^3x through Parseval.
double position_pairing(const SpectralField& p, const SpectralField& q);

// <(p1,q1)|(p2,q2)>: phase exp(-(i/2)\int(p1.q2 - q1.p2)) times the Gaussian
// factor exp(-(1/2)\int d^3k/((2pi)^3 2|k|) |dP - i|k| dQ|^2). On node sets
// the discrete Bargmann form is used, which reduces to the same expression
// for Hermitian-symmetric lattices.
Complex coherent_inner_product(const CoherentLabel& l1, const CoherentLabel& l2);

struct Composition {
    Complex phase;
    CoherentLabel combined;
};
// U(l1) U(l2) = phase * U(l1 + l2), phase = exp((i/2)\int(p1.q2 - q1.p2)).
Composition displacement_composition_phase(const CoherentLabel& l1, const CoherentLabel& l2);

// <(p,q)| E(x) |(p,q)> assembled from the annihilation-operator eigenvalues
// on the given node set.
Vec3 mean_electric_field(const CoherentLabel& label, const Vec3& x, const KNodes& nodes);

}  // namespace qet
