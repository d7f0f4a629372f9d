#include "qet/negative_energy.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qet/errors.hpp"

namespace qet {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPiCubed = 8.0 * kPi * kPi * kPi;

Complex vdot(const CVec3& a, const CVec3& b) { return bdot(a, b); }

}  // namespace

double DiscreteMode::normalization() const { return std::sqrt(weight / (kTwoPiCubed * 2.0 * norm(k))); }

CVec3 DiscreteMode::electric(const Vec3& x) const {
    const double kn = norm(k);
    return to_complex(polarization) * (Complex(0.0, -kn * normalization()) * std::polar(1.0, dot(k, x)));
}

CVec3 DiscreteMode::magnetic(const Vec3& x) const {
    return to_complex(cross(k, polarization)) * (Complex(0.0, normalization()) * std::polar(1.0, dot(k, x)));
}

double TwoPhotonState::norm2() const {
    double s = 0.0;
    for (const auto& f : amplitudes) s += std::norm(f);
    return s;
}

void validate_state(const TwoPhotonState& state) {
    if (state.modes.size() != state.amplitudes.size())
        throw ValidationError("two-photon state: amplitude count does not match mode count");
    if (state.modes.empty()) throw ValidationError("two-photon state: no modes");
    const double n2 = state.norm2();
    if (std::abs(n2 - 1.0) > 1e-10) {
        std::ostringstream msg;
        msg << "two-photon state: sum |f|^2 = " << n2 << ", expected 1";
        throw ValidationError(msg.str());
    }
    for (const auto& m : state.modes) {
        const double kn = norm(m.k);
        if (!(kn > 0.0)) throw ValidationError("two-photon state: mode with k = 0");
        if (std::abs(norm(m.polarization) - 1.0) > 1e-12 || std::abs(dot(m.polarization, m.k)) > 1e-12 * kn)
            throw ValidationError("two-photon state: polarization must be a unit vector transverse to k");
        if (!(m.weight > 0.0)) throw ValidationError("two-photon state: mode weight must be positive");
    }
}

TwoPhotonState gaussian_two_photon_state(const Vec3& k0, double width, const Vec3& polarization_hint, std::size_t n) {
    if (!(width > 0.0)) throw ValidationError("gaussian_two_photon_state: width must be positive");
    if (n < 1) throw ValidationError("gaussian_two_photon_state: n must be positive");
    const double dk = 8.0 * width / static_cast<double>(n);
    const double w = dk * dk * dk;
    TwoPhotonState s;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
                const Vec3 off = dk * Vec3{a - 0.5 * (n - 1.0), b - 0.5 * (n - 1.0), c - 0.5 * (n - 1.0)};
                const Vec3 k = k0 + off;
                const double kn = norm(k);
                if (kn == 0.0) continue;
                const Vec3 kh = (1.0 / kn) * k;
                Vec3 e = polarization_hint - dot(polarization_hint, kh) * kh;
                if (norm(e) < 1e-8) e = Vec3{0, 1, 0} - kh.y * kh;
                e = (1.0 / norm(e)) * e;
                s.modes.push_back({k, e, w});
                s.amplitudes.emplace_back(std::exp(-norm2(off) / (4.0 * width * width)) * std::sqrt(w));
            }
    const double scale = 1.0 / std::sqrt(s.norm2());
    for (auto& f : s.amplitudes) f *= scale;
    return s;
}

MatrixElements two_photon_matrix_elements(const TwoPhotonState& state, const Vec3& x) {
    validate_state(state);
    CVec3 U{}, V{};
    for (std::size_t j = 0; j < state.modes.size(); ++j) {
        U += state.modes[j].electric(x) * state.amplitudes[j];
        V += state.modes[j].magnetic(x) * state.amplitudes[j];
    }
    MatrixElements m;
    // b_j b_l (c^dag)^2/sqrt2 |0> = sqrt2 f_j f_l |0>;  <2| b_j^dag b_l |2> = 2 f_j^* f_l
    m.B = (vdot(U, U) + vdot(V, V)) / std::sqrt(2.0);
    m.A = 2.0 * (qet::norm2(U) + qet::norm2(V));
    m.vacuum = 0.0;
    return m;
}

SuperpositionOptimum optimal_superposition(double A, Complex B) {
    if (!(A >= 0.0)) throw ValidationError("optimal_superposition: A must be non-negative");
    const double b = std::abs(B);
    if (A == 0.0 && b == 0.0) throw ValidationError("optimal_superposition: A = B = 0 has no unique optimum");
    SuperpositionOptimum out;
    if (b == 0.0) return out;
    // cos(2 theta) = A/N and sin(2 theta) = -2|B|/N with N = sqrt(A^2 + 4|B|^2),
    // while e^{i delta} B = |B| aligns the interference term.
    out.params.theta = kPi - 0.5 * std::atan2(2.0 * b, A);
    double delta = -std::arg(B);
    if (delta < 0.0) delta += 2.0 * kPi;
    if (delta >= 2.0 * kPi) delta -= 2.0 * kPi;
    out.params.delta = delta;
    out.eps_min = -0.5 * (std::hypot(A, 2.0 * b) - A);
    return out;
}

double superposition_energy(double A, Complex B, const SuperpositionParams& p) {
    const double c = std::cos(p.theta), s = std::sin(p.theta);
    return s * s * A + 2.0 * c * s * std::real(std::polar(1.0, p.delta) * B);
}

// ---------------------------------------------------------------------------
// Fock oracle
// ---------------------------------------------------------------------------

FockSpace::FockSpace(std::size_t modes, std::size_t cutoff) : modes_(modes), cutoff_(cutoff), dim_(1) {
    if (modes == 0) throw ValidationError("fock space: need at least one mode");
    for (std::size_t j = 0; j < modes; ++j) {
        dim_ *= cutoff + 1;
        if (dim_ > kMaxFockDim) {
            std::ostringstream msg;
            msg << "fock space: basis (" << cutoff + 1 << ")^" << modes << " exceeds " << kMaxFockDim << " states";
            throw ValidationError(msg.str());
        }
    }
    const std::size_t base = cutoff + 1;
    for (std::size_t j = 0; j < modes; ++j) {
        Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(dim_, dim_);
        std::size_t stride = 1;
        for (std::size_t m = j + 1; m < modes; ++m) stride *= base;
        for (std::size_t idx = 0; idx < dim_; ++idx) {
            const std::size_t occ = (idx / stride) % base;
            if (occ > 0) b(idx - stride, idx) = std::sqrt(static_cast<double>(occ));
        }
        b_.push_back(std::move(b));
    }
}

Eigen::VectorXcd FockSpace::vacuum() const {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim_);
    v(0) = 1.0;
    return v;
}

Eigen::MatrixXcd fock_energy_density(const FockSpace& space, const std::vector<DiscreteMode>& modes, const Vec3& x) {
    if (modes.size() != space.modes()) throw ValidationError("fock_energy_density: mode count mismatch");
    const std::size_t n = modes.size();
    std::vector<CVec3> u(n), v(n);
    for (std::size_t j = 0; j < n; ++j) {
        u[j] = modes[j].electric(x);
        v[j] = modes[j].magnetic(x);
    }
    Eigen::MatrixXcd eps = Eigen::MatrixXcd::Zero(space.dim(), space.dim());
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l) {
            const auto& bj = space.annihilation(j);
            const auto& bl = space.annihilation(l);
            const Complex uu = vdot(u[j], u[l]) + vdot(v[j], v[l]);
            const Complex ud = hdot(u[j], u[l]) + hdot(v[j], v[l]);
            // :(X)^2: for X = sum(w b + w^* b^dag): w_j w_l b_j b_l + h.c. + 2 w_j^* w_l b_j^dag b_l
            eps += 0.5 * (uu * (bj * bl) + std::conj(uu) * (bj.adjoint() * bl.adjoint()) +
                          2.0 * ud * (bj.adjoint() * bl));
        }
    return eps;
}

MatrixElements fock_oracle(const TwoPhotonState& state, const Vec3& x) {
    validate_state(state);
    if (state.modes.size() > 3) throw ValidationError("fock_oracle: at most 3 modes (basis overflow)");
    const FockSpace space(state.modes.size(), 2);
    Eigen::MatrixXcd cdag = Eigen::MatrixXcd::Zero(space.dim(), space.dim());
    for (std::size_t j = 0; j < state.modes.size(); ++j) cdag += state.amplitudes[j] * space.annihilation(j).adjoint();
    const Eigen::VectorXcd vac = space.vacuum();
    const Eigen::VectorXcd two = cdag * (cdag * vac) / std::sqrt(2.0);
    const Eigen::MatrixXcd eps = fock_energy_density(space, state.modes, x);
    MatrixElements m;
    m.A = two.dot(eps * two).real();
    m.B = vac.dot(eps * two);
    m.vacuum = vac.dot(eps * vac).real();
    return m;
}

std::vector<Complex> field_coupling(const std::vector<DiscreteMode>& modes, const SpectralField& a) {
    std::vector<Complex> alpha;
    alpha.reserve(modes.size());
    for (const auto& m : modes) {
        const CVec3 at = a.evaluate(m.k);
        alpha.push_back(Complex(0.0, -norm(m.k) * m.normalization()) * bdot(m.polarization, conj(at)));
    }
    return alpha;
}

Eigen::MatrixXcd fock_linear_field(const FockSpace& space, const std::vector<Complex>& alpha) {
    if (alpha.size() != space.modes()) throw ValidationError("fock_linear_field: coefficient count mismatch");
    Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(space.dim(), space.dim());
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        const auto& b = space.annihilation(j);
        X += alpha[j] * b + std::conj(alpha[j]) * b.adjoint();
    }
    return X;
}

Eigen::MatrixXcd hermitian_function(const Eigen::MatrixXcd& H, const std::function<Complex(double)>& f) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    if (es.info() != Eigen::Success) throw NumericalError("hermitian_function: eigendecomposition failed");
    Eigen::VectorXcd d(H.rows());
    for (Eigen::Index i = 0; i < H.rows(); ++i) d(i) = f(es.eigenvalues()(i));
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace qet
