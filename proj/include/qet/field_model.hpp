#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "qet/vec3.hpp"

namespace qet {

// Fraction of a field's L2 mass allowed outside its effective radius.
inline constexpr double kTailTol = 1e-10;

// a(x) = curl( A exp(-|x-c|^2 / (2 sigma^2)) axis )
struct CurlGaussian {
    double amplitude = 1.0;
    double sigma = 1.0;
    Vec3 center{};
    Vec3 axis{0, 0, 1};
};

// Vector samples on a regular grid with uniform spacing. Node (i,j,k) sits at
// origin + spacing*(i,j,k); storage is row-major with k fastest.
struct VectorGrid {
    std::array<std::size_t, 3> dims{0, 0, 0};
    Vec3 origin{};
    double spacing = 1.0;
    std::vector<Vec3> values;

    std::size_t size() const { return dims[0] * dims[1] * dims[2]; }
    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
        return (i * dims[1] + j) * dims[2] + k;
    }
    Vec3 node(std::size_t i, std::size_t j, std::size_t k) const {
        return origin + spacing * Vec3{static_cast<double>(i), static_cast<double>(j), static_cast<double>(k)};
    }
    // Trilinear interpolation; zero outside the sampled box.
    Vec3 interpolate(const Vec3& x) const;
};

enum class FieldFamily { CurlGaussian, GridSampled };

// A real, divergence-free, localized vector field. Immutable.
class ShapeField {
public:
    FieldFamily family() const noexcept { return family_; }
    // CurlGaussian: A. GridSampled: max sample magnitude.
    double amplitude() const noexcept { return amplitude_; }
    double sigma() const noexcept { return sigma_; }
    const Vec3& center() const noexcept { return center_; }
    // Zero for grid-sampled fields.
    const Vec3& axis() const noexcept { return axis_; }
    // Radius about center() holding 1 - kTailTol of the L2 mass.
    double effective_radius() const noexcept { return effective_radius_; }

    Vec3 value(const Vec3& x) const;
    Vec3 curl(const Vec3& x) const;

    ShapeField scaled(double lambda) const;

    const CurlGaussian* curl_gaussian() const noexcept { return std::get_if<CurlGaussian>(&data_); }
    const VectorGrid* grid() const noexcept;
    double grid_scale() const noexcept { return grid_scale_; }

private:
    friend ShapeField make_curl_gaussian(double, double, const Vec3&, const Vec3&);
    friend ShapeField make_grid_field(VectorGrid, std::optional<double>);

    ShapeField() = default;

    FieldFamily family_ = FieldFamily::CurlGaussian;
    std::variant<CurlGaussian, std::shared_ptr<const VectorGrid>> data_;
    double grid_scale_ = 1.0;
    double amplitude_ = 0.0;
    double sigma_ = 1.0;
    Vec3 center_{};
    Vec3 axis_{};
    double effective_radius_ = 0.0;
};

ShapeField make_curl_gaussian(double amplitude, double sigma, const Vec3& center, const Vec3& axis);

// sigma defaults to the RMS radius of |f|^2 divided by sqrt(5/2), which
// reproduces sigma for sampled curl-Gaussians.
ShapeField make_grid_field(VectorGrid grid, std::optional<double> sigma = std::nullopt);

// Rows of x,y,z,fx,fy,fz (optional header line). Points must fill a regular
// grid with equal spacing on all axes.
ShapeField load_grid_field_csv(const std::filesystem::path& path, std::optional<double> sigma = std::nullopt);

double curl_gaussian_effective_radius(double sigma);

// Scalar window: 1 inside inner_radius, cosine rolloff to 0 at 2*inner_radius.
class WindowFunction {
public:
    WindowFunction(const Vec3& center, double inner_radius);
    double value(const Vec3& x) const;
    const Vec3& center() const noexcept { return center_; }
    double inner_radius() const noexcept { return inner_radius_; }

private:
    Vec3 center_;
    double inner_radius_;
};

// ---------------------------------------------------------------------------
// Spectral representation
// ---------------------------------------------------------------------------

// Position lattice of n^3 nodes at origin + dx*(i,j,k), dx = pi/k_max, with the
// matching FFT k-lattice (spacing dk = 2 k_max / n).
struct LatticeSpec {
    std::size_t n = 128;
    double k_max = 8.0;
    Vec3 origin{};

    double dx() const;
    double dk() const;
    double box_length() const { return dx() * static_cast<double>(n); }
};

// A set of k-points with quadrature weights (d^3k cell volumes).
class KNodes {
public:
    static std::shared_ptr<const KNodes> lattice(const LatticeSpec& spec);
    static std::shared_ptr<const KNodes> explicit_nodes(std::vector<Vec3> k, std::vector<double> weight);

    std::size_t size() const noexcept;
    Vec3 k(std::size_t i) const;
    double weight(std::size_t i) const;
    const std::optional<LatticeSpec>& lattice_spec() const noexcept { return lattice_; }
    // Index of -k on a lattice, or nullopt for the unpaired Nyquist planes.
    std::optional<std::size_t> mirror(std::size_t i) const;

private:
    std::optional<LatticeSpec> lattice_;
    std::vector<Vec3> k_;
    std::vector<double> w_;
};

enum class SpectralRepresentation { ClosedForm, Grid };

// Fourier amplitudes f~(k) = \int f(x) e^{-ik.x} d^3x. ClosedForm holds a sum
// of curl-Gaussian terms; Grid holds values on a KNodes set.
class SpectralField {
public:
    SpectralField() = default;  // closed-form zero
    static SpectralField closed_form(std::vector<CurlGaussian> terms);
    static SpectralField on_nodes(std::shared_ptr<const KNodes> nodes, std::vector<CVec3> values);

    SpectralRepresentation representation() const noexcept {
        return nodes_ ? SpectralRepresentation::Grid : SpectralRepresentation::ClosedForm;
    }
    const std::vector<CurlGaussian>& terms() const noexcept { return terms_; }
    const std::shared_ptr<const KNodes>& nodes() const noexcept { return nodes_; }
    const std::vector<CVec3>& values() const noexcept { return values_; }

    // Closed form at arbitrary k; for Grid fields only node values exist.
    CVec3 evaluate(const Vec3& k) const;
    // Values on a node set: native values for Grid, closed form evaluated otherwise.
    std::vector<CVec3> sample(const KNodes& nodes) const;

    SpectralField scaled(double s) const;
    friend SpectralField operator+(const SpectralField& a, const SpectralField& b);
    friend SpectralField operator-(const SpectralField& a, const SpectralField& b) { return a + b.scaled(-1.0); }

private:
    std::vector<CurlGaussian> terms_;
    std::shared_ptr<const KNodes> nodes_;
    std::vector<CVec3> values_;
};

CVec3 curl_gaussian_transform(const CurlGaussian& g, const Vec3& k);

struct GridSpec {
    std::size_t n = 128;
    std::optional<double> k_max;  // default 8 / sigma
};

// CurlGaussian without a grid -> ClosedForm. With a grid (or for grid-sampled
// fields) -> discrete transform of position samples on a lattice centered on
// the field.
SpectralField spectral_transform(const ShapeField& field, std::optional<GridSpec> grid = std::nullopt);

// Spectral values on a caller-chosen lattice. Curl-Gaussians are evaluated in
// closed form at the nodes; grid-sampled fields are resampled and transformed.
// Nyquist planes are zeroed.
SpectralField spectral_transform_on(const ShapeField& field, const LatticeSpec& lattice);

// Position samples of a lattice SpectralField (real part of the inverse DFT).
VectorGrid inverse_transform(const SpectralField& sf);

struct DivergenceReport {
    double max_residual = 0.0;  // max |div f| over the sample grid
    double threshold = 0.0;     // tol * max|f| / sigma
    bool pass = true;
};
DivergenceReport check_divergence_free(const ShapeField& field, double tol = 1e-3);

CVec3 transverse_project(const Vec3& k, const CVec3& v);
SpectralField transverse_project(const SpectralField& sf);

struct SpectralInvariants {
    double max_longitudinal = 0.0;   // max |k.a~| / (|k| max|a~|)
    double max_hermitian_defect = 0.0;  // max |a~(-k) - a~(k)^*| / max|a~|
    double zero_mode = 0.0;          // |a~(0)| / max|a~|
};
// ClosedForm fields satisfy all three exactly; Grid fields are measured.
SpectralInvariants check_spectral_invariants(const SpectralField& sf);

}  // namespace qet
