#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "qet/field_model.hpp"
#include "qet/vec3.hpp"

namespace qet {

// One discretized field mode: wave vector, real unit polarization (transverse
// to k) and the d^3k cell weight it represents.
struct DiscreteMode {
    Vec3 k;
    Vec3 polarization;
    double weight = 1.0;

    // sqrt(weight / ((2pi)^3 2|k|))
    double normalization() const;
    // Coefficients of b in E(x) and B(x): E = sum(u b + u^* b^dag), likewise B.
    CVec3 electric(const Vec3& x) const;
    CVec3 magnetic(const Vec3& x) const;
};

// Two photons in the single wave-packet mode c^dag = sum_j f_j b_j^dag.
struct TwoPhotonState {
    std::vector<DiscreteMode> modes;
    std::vector<Complex> amplitudes;

    double norm2() const;
};

// Throws ValidationError unless sum |f|^2 = 1 to 1e-10 and every polarization
// is a unit vector transverse to its k.
void validate_state(const TwoPhotonState& state);

// Gaussian packet around k0 with momentum width `width`, polarization the
// component of `polarization_hint` transverse to each k, on an n^3 lattice
// spanning k0 +- 4 width.
TwoPhotonState gaussian_two_photon_state(const Vec3& k0 = {0, 0, 3}, double width = 0.5,
                                         const Vec3& polarization_hint = {1, 0, 0}, std::size_t n = 24);

struct MatrixElements {
    double A = 0.0;   // <2|eps(x)|2>
    Complex B{};      // <0|eps(x)|2>
    double vacuum = 0.0;  // <0|eps(x)|0>
};

// Wick contraction of the normal-ordered energy density.
MatrixElements two_photon_matrix_elements(const TwoPhotonState& state, const Vec3& x);

struct SuperpositionParams {
    double theta = 0.0;  // [0, pi]
    double delta = 0.0;  // [0, 2 pi)
};

struct SuperpositionOptimum {
    SuperpositionParams params;
    double eps_min = 0.0;
};

// Minimizes <Psi|eps|Psi> over |Psi> = cos(theta)|0> + e^{i delta} sin(theta)|2>.
SuperpositionOptimum optimal_superposition(double A, Complex B);

double superposition_energy(double A, Complex B, const SuperpositionParams& params);

// ---------------------------------------------------------------------------
// Truncated Fock-space oracle
// ---------------------------------------------------------------------------

// Tensor product of `modes` oscillators, each truncated to `cutoff` photons.
class FockSpace {
public:
    FockSpace(std::size_t modes, std::size_t cutoff);

    std::size_t modes() const noexcept { return modes_; }
    std::size_t cutoff() const noexcept { return cutoff_; }
    std::size_t dim() const noexcept { return dim_; }
    const Eigen::MatrixXcd& annihilation(std::size_t j) const { return b_[j]; }
    Eigen::VectorXcd vacuum() const;

private:
    std::size_t modes_, cutoff_, dim_;
    std::vector<Eigen::MatrixXcd> b_;
};

// Largest basis the oracle will build.
inline constexpr std::size_t kMaxFockDim = 4096;

// :eps(x): as an explicit matrix.
Eigen::MatrixXcd fock_energy_density(const FockSpace& space, const std::vector<DiscreteMode>& modes, const Vec3& x);

// Matrix elements from explicit matrices with photon cutoff 2 (at most 3 modes).
MatrixElements fock_oracle(const TwoPhotonState& state, const Vec3& x);

// alpha_j in \int a(x).E(x) d^3x = sum_j (alpha_j b_j + h.c.): alpha_j = \int a.u_j.
std::vector<Complex> field_coupling(const std::vector<DiscreteMode>& modes, const SpectralField& a);

// sum_j (alpha_j b_j + alpha_j^* b_j^dag)
Eigen::MatrixXcd fock_linear_field(const FockSpace& space, const std::vector<Complex>& alpha);

// f(H) for Hermitian H via its eigendecomposition.
Eigen::MatrixXcd hermitian_function(const Eigen::MatrixXcd& H, const std::function<Complex(double)>& f);

}  // namespace qet
