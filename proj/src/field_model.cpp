#include "qet/field_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "qet/errors.hpp"
#include "qet/fft.hpp"

namespace qet {

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 curl_gaussian_value(const CurlGaussian& g, const Vec3& x) {
    const Vec3 u = x - g.center;
    const double s2 = g.sigma * g.sigma;
    const double psi = std::exp(-norm2(u) / (2.0 * s2));
    // grad(psi) x axis = -(psi/s2) u x axis
    return (g.amplitude * psi / s2) * cross(g.axis, u);
}

Vec3 curl_gaussian_curl(const CurlGaussian& g, const Vec3& x) {
    const Vec3 u = x - g.center;
    const double s2 = g.sigma * g.sigma;
    const double r2 = norm2(u);
    const double psi = std::exp(-r2 / (2.0 * s2));
    const double nu = dot(g.axis, u);
    return g.amplitude * psi * ((nu / (s2 * s2)) * u + ((2.0 / s2) - r2 / (s2 * s2)) * g.axis);
}

// Pad and center a lattice on `center` so that the center falls on a node.
LatticeSpec lattice_around(const Vec3& center, std::size_t n, double k_max) {
    LatticeSpec spec{n, k_max, {}};
    const double half = spec.dx() * static_cast<double>(n / 2);
    spec.origin = center - Vec3{half, half, half};
    return spec;
}

std::size_t lattice_index(std::size_t a, std::size_t b, std::size_t c, std::size_t n) { return (a * n + b) * n + c; }

}  // namespace

// ---------------------------------------------------------------------------
// VectorGrid
// ---------------------------------------------------------------------------

Vec3 VectorGrid::interpolate(const Vec3& x) const {
    double f[3];
    std::size_t i0[3];
    for (int d = 0; d < 3; ++d) {
        const double s = (x[d] - origin[d]) / spacing;
        if (s < 0.0 || s > static_cast<double>(dims[d] - 1)) return {};
        double fl = std::floor(s);
        if (fl >= static_cast<double>(dims[d] - 1)) fl = static_cast<double>(dims[d]) - 2.0;
        if (dims[d] == 1) fl = 0.0;
        i0[d] = static_cast<std::size_t>(fl);
        f[d] = s - fl;
    }
    Vec3 out{};
    for (int c = 0; c < 8; ++c) {
        std::size_t idx[3];
        double w = 1.0;
        bool ok = true;
        for (int d = 0; d < 3; ++d) {
            const int bit = (c >> d) & 1;
            idx[d] = i0[d] + static_cast<std::size_t>(bit);
            if (idx[d] >= dims[d]) {
                ok = false;
                break;
            }
            w *= bit ? f[d] : 1.0 - f[d];
        }
        if (ok && w != 0.0) out += w * values[index(idx[0], idx[1], idx[2])];
    }
    return out;
}

// ---------------------------------------------------------------------------
// ShapeField
// ---------------------------------------------------------------------------

double curl_gaussian_effective_radius(double sigma) {
    // |a|^2 integrated over angles goes as r^4 exp(-r^2/sigma^2), so the mass
    // outside R is Q(5/2, R^2/sigma^2).
    return sigma * std::sqrt(boost::math::gamma_q_inv(2.5, kTailTol));
}

ShapeField make_curl_gaussian(double amplitude, double sigma, const Vec3& center, const Vec3& axis) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("curl-Gaussian: sigma must be positive");
    if (!std::isfinite(amplitude)) throw ValidationError("curl-Gaussian: amplitude must be finite");
    const double an = norm(axis);
    if (!(an > 0.0)) throw ValidationError("curl-Gaussian: axis must be non-zero");
    if (std::abs(an - 1.0) > 1e-12) throw ValidationError("curl-Gaussian: axis must be normalized");
    ShapeField f;
    f.family_ = FieldFamily::CurlGaussian;
    f.data_ = CurlGaussian{amplitude, sigma, center, axis};
    f.amplitude_ = amplitude;
    f.sigma_ = sigma;
    f.center_ = center;
    f.axis_ = axis;
    f.effective_radius_ = curl_gaussian_effective_radius(sigma);
    return f;
}

ShapeField make_grid_field(VectorGrid grid, std::optional<double> sigma) {
    if (grid.size() == 0 || grid.values.size() != grid.size())
        throw ValidationError("grid field: value count does not match dims");
    if (!(grid.spacing > 0.0)) throw ValidationError("grid field: spacing must be positive");
    if (sigma && !(*sigma > 0.0)) throw ValidationError("grid field: sigma must be positive");

    double mass = 0.0, peak = 0.0;
    Vec3 centroid{};
    for (std::size_t i = 0; i < grid.dims[0]; ++i)
        for (std::size_t j = 0; j < grid.dims[1]; ++j)
            for (std::size_t k = 0; k < grid.dims[2]; ++k) {
                const double m = norm2(grid.values[grid.index(i, j, k)]);
                mass += m;
                centroid += m * grid.node(i, j, k);
                peak = std::max(peak, std::sqrt(m));
            }

    ShapeField f;
    f.family_ = FieldFamily::GridSampled;
    f.amplitude_ = peak;
    if (mass > 0.0) {
        centroid = (1.0 / mass) * centroid;
        std::vector<std::pair<double, double>> radial;
        radial.reserve(grid.size());
        double r2 = 0.0;
        for (std::size_t i = 0; i < grid.dims[0]; ++i)
            for (std::size_t j = 0; j < grid.dims[1]; ++j)
                for (std::size_t k = 0; k < grid.dims[2]; ++k) {
                    const double m = norm2(grid.values[grid.index(i, j, k)]);
                    const double r = norm(grid.node(i, j, k) - centroid);
                    r2 += m * r * r;
                    if (m > 0.0) radial.emplace_back(r, m);
                }
        std::sort(radial.begin(), radial.end());
        // Walk inward from the outermost sample until the tail mass exceeds tol.
        double tail = 0.0;
        double radius = radial.back().first;
        for (auto it = radial.rbegin(); it != radial.rend(); ++it) {
            if (tail + it->second > kTailTol * mass) {
                radius = it->first;
                break;
            }
            tail += it->second;
        }
        f.effective_radius_ = radius + grid.spacing * std::sqrt(3.0) / 2.0;
        f.sigma_ = sigma.value_or(std::sqrt(r2 / mass / 2.5));
        if (!(f.sigma_ > 0.0)) f.sigma_ = grid.spacing;
    } else {
        Vec3 mid{};
        for (int d = 0; d < 3; ++d) mid[d] = grid.origin[d] + 0.5 * grid.spacing * static_cast<double>(grid.dims[d] - 1);
        centroid = mid;
        f.sigma_ = sigma.value_or(grid.spacing);
        f.effective_radius_ = 0.0;
    }
    f.center_ = centroid;
    f.axis_ = {};
    f.data_ = std::make_shared<const VectorGrid>(std::move(grid));
    return f;
}

ShapeField load_grid_field_csv(const std::filesystem::path& path, std::optional<double> sigma) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open grid field file: " + path.string());
    struct Row {
        Vec3 x, f;
    };
    std::vector<Row> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double v[6];
        int got = 0;
        while (got < 6 && ss >> v[got]) ++got;
        if (got != 6) {
            if (rows.empty() && lineno == 1) continue;  // header
            throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": expected 6 numeric columns");
        }
        rows.push_back({{v[0], v[1], v[2]}, {v[3], v[4], v[5]}});
    }
    if (rows.empty()) throw ValidationError(path.string() + ": no data rows");

    std::array<std::vector<double>, 3> axes;
    for (int d = 0; d < 3; ++d) {
        for (const auto& r : rows) axes[d].push_back(r.x[d]);
        std::sort(axes[d].begin(), axes[d].end());
        axes[d].erase(std::unique(axes[d].begin(), axes[d].end(),
                                  [](double a, double b) { return std::abs(a - b) <= 1e-9 * (1.0 + std::abs(a)); }),
                      axes[d].end());
    }
    double spacing = 0.0;
    for (int d = 0; d < 3; ++d)
        if (axes[d].size() > 1) {
            spacing = axes[d][1] - axes[d][0];
            break;
        }
    if (!(spacing > 0.0)) throw ValidationError(path.string() + ": cannot infer grid spacing");
    for (int d = 0; d < 3; ++d)
        for (std::size_t i = 1; i < axes[d].size(); ++i)
            if (std::abs(axes[d][i] - axes[d][i - 1] - spacing) > 1e-6 * spacing)
                throw ValidationError(path.string() + ": grid spacing is not uniform");

    VectorGrid g;
    g.dims = {axes[0].size(), axes[1].size(), axes[2].size()};
    if (rows.size() != g.size()) throw ValidationError(path.string() + ": rows do not fill a regular grid");
    g.origin = {axes[0][0], axes[1][0], axes[2][0]};
    g.spacing = spacing;
    g.values.assign(g.size(), Vec3{});
    std::vector<bool> seen(g.size(), false);
    for (const auto& r : rows) {
        std::size_t idx[3];
        for (int d = 0; d < 3; ++d) idx[d] = static_cast<std::size_t>(std::lround((r.x[d] - g.origin[d]) / spacing));
        const std::size_t n = g.index(idx[0], idx[1], idx[2]);
        if (seen[n]) throw ValidationError(path.string() + ": duplicate grid point");
        seen[n] = true;
        g.values[n] = r.f;
    }
    return make_grid_field(std::move(g), sigma);
}

const VectorGrid* ShapeField::grid() const noexcept {
    const auto* p = std::get_if<std::shared_ptr<const VectorGrid>>(&data_);
    return p ? p->get() : nullptr;
}

Vec3 ShapeField::value(const Vec3& x) const {
    if (const auto* g = curl_gaussian()) return curl_gaussian_value(*g, x);
    return grid_scale_ * grid()->interpolate(x);
}

Vec3 ShapeField::curl(const Vec3& x) const {
    if (const auto* g = curl_gaussian()) return curl_gaussian_curl(*g, x);
    const double h = grid()->spacing;
    auto d = [&](int axis) {
        Vec3 e{};
        e[axis] = h;
        return (1.0 / (2.0 * h)) * (value(x + e) - value(x - e));
    };
    const Vec3 dx = d(0), dy = d(1), dz = d(2);
    return {dy.z - dz.y, dz.x - dx.z, dx.y - dy.x};
}

ShapeField ShapeField::scaled(double lambda) const {
    ShapeField f = *this;
    if (auto* g = std::get_if<CurlGaussian>(&f.data_)) {
        g->amplitude *= lambda;
        f.amplitude_ = g->amplitude;
    } else {
        f.grid_scale_ *= lambda;
        f.amplitude_ *= std::abs(lambda);
    }
    return f;
}

// ---------------------------------------------------------------------------
// WindowFunction
// ---------------------------------------------------------------------------

WindowFunction::WindowFunction(const Vec3& center, double inner_radius) : center_(center), inner_radius_(inner_radius) {
    if (!(inner_radius > 0.0)) throw ValidationError("window: inner radius must be positive");
}

double WindowFunction::value(const Vec3& x) const {
    const double r = norm(x - center_);
    if (r <= inner_radius_) return 1.0;
    if (r >= 2.0 * inner_radius_) return 0.0;
    return 0.5 * (1.0 + std::cos(kPi * (r - inner_radius_) / inner_radius_));
}

// ---------------------------------------------------------------------------
// KNodes
// ---------------------------------------------------------------------------

double LatticeSpec::dx() const { return kPi / k_max; }
double LatticeSpec::dk() const { return 2.0 * k_max / static_cast<double>(n); }

std::shared_ptr<const KNodes> KNodes::lattice(const LatticeSpec& spec) {
    if (spec.n < 2) throw ValidationError("lattice: n must be at least 2");
    if (!(spec.k_max > 0.0)) throw ValidationError("lattice: k_max must be positive");
    auto nodes = std::make_shared<KNodes>();
    nodes->lattice_ = spec;
    return nodes;
}

std::shared_ptr<const KNodes> KNodes::explicit_nodes(std::vector<Vec3> k, std::vector<double> weight) {
    if (k.size() != weight.size()) throw ValidationError("k-nodes: weight count mismatch");
    auto nodes = std::make_shared<KNodes>();
    nodes->k_ = std::move(k);
    nodes->w_ = std::move(weight);
    return nodes;
}

std::size_t KNodes::size() const noexcept {
    if (lattice_) return lattice_->n * lattice_->n * lattice_->n;
    return k_.size();
}

Vec3 KNodes::k(std::size_t i) const {
    if (!lattice_) return k_[i];
    const std::size_t n = lattice_->n;
    const double dk = lattice_->dk();
    const std::size_t c = i % n, b = (i / n) % n, a = i / (n * n);
    return {dk * static_cast<double>(fft::frequency_index(a, n)), dk * static_cast<double>(fft::frequency_index(b, n)),
            dk * static_cast<double>(fft::frequency_index(c, n))};
}

double KNodes::weight(std::size_t i) const {
    if (!lattice_) return w_[i];
    const double dk = lattice_->dk();
    return dk * dk * dk;
}

std::optional<std::size_t> KNodes::mirror(std::size_t i) const {
    if (!lattice_) return std::nullopt;
    const std::size_t n = lattice_->n;
    const std::size_t c = i % n, b = (i / n) % n, a = i / (n * n);
    if (n % 2 == 0 && (a == n / 2 || b == n / 2 || c == n / 2)) return std::nullopt;
    return lattice_index((n - a) % n, (n - b) % n, (n - c) % n, n);
}

namespace {
bool same_nodes(const KNodes& a, const KNodes& b) {
    if (&a == &b) return true;
    const auto& la = a.lattice_spec();
    const auto& lb = b.lattice_spec();
    // The k lattice does not depend on the position origin.
    return la && lb && la->n == lb->n && la->k_max == lb->k_max;
}
}  // namespace

// ---------------------------------------------------------------------------
// SpectralField
// ---------------------------------------------------------------------------

CVec3 curl_gaussian_transform(const CurlGaussian& g, const Vec3& k) {
    const double s2 = g.sigma * g.sigma;
    const double env = g.amplitude * std::pow(2.0 * kPi * s2, 1.5) * std::exp(-0.5 * s2 * norm2(k));
    const Complex phase = std::polar(1.0, -dot(k, g.center));
    const Vec3 kn = cross(k, g.axis);
    return to_complex(kn) * (Complex(0.0, env) * phase);
}

SpectralField SpectralField::closed_form(std::vector<CurlGaussian> terms) {
    SpectralField sf;
    sf.terms_ = std::move(terms);
    return sf;
}

SpectralField SpectralField::on_nodes(std::shared_ptr<const KNodes> nodes, std::vector<CVec3> values) {
    if (!nodes) throw ValidationError("spectral field: null node set");
    if (values.size() != nodes->size()) throw ValidationError("spectral field: value count mismatch");
    SpectralField sf;
    sf.nodes_ = std::move(nodes);
    sf.values_ = std::move(values);
    return sf;
}

CVec3 SpectralField::evaluate(const Vec3& k) const {
    if (nodes_) throw ValidationError("spectral field: grid representation has no off-node values");
    CVec3 out{};
    for (const auto& t : terms_) out += curl_gaussian_transform(t, k);
    return out;
}

std::vector<CVec3> SpectralField::sample(const KNodes& nodes) const {
    if (nodes_) {
        if (!same_nodes(*nodes_, nodes)) throw ValidationError("spectral field: node sets differ");
        return values_;
    }
    std::vector<CVec3> out(nodes.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = evaluate(nodes.k(i));
    return out;
}

SpectralField SpectralField::scaled(double s) const {
    SpectralField out = *this;
    for (auto& t : out.terms_) t.amplitude *= s;
    for (auto& v : out.values_) v *= s;
    return out;
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
    if (!a.nodes_ && !b.nodes_) {
        std::vector<CurlGaussian> terms = a.terms_;
        terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
        return SpectralField::closed_form(std::move(terms));
    }
    const auto& nodes = a.nodes_ ? a.nodes_ : b.nodes_;
    std::vector<CVec3> va = a.sample(*nodes);
    const std::vector<CVec3> vb = b.sample(*nodes);
    for (std::size_t i = 0; i < va.size(); ++i) va[i] += vb[i];
    return SpectralField::on_nodes(nodes, std::move(va));
}

// ---------------------------------------------------------------------------
// Transforms
// ---------------------------------------------------------------------------

SpectralField spectral_transform(const ShapeField& field, std::optional<GridSpec> grid) {
    const auto* cg = field.curl_gaussian();
    if (cg && !grid) return SpectralField::closed_form({*cg});

    GridSpec spec = grid.value_or(GridSpec{});
    if (!grid && field.grid()) {
        // Native resolution of the sampled data.
        spec.k_max = kPi / field.grid()->spacing;
        std::size_t n = std::max({field.grid()->dims[0], field.grid()->dims[1], field.grid()->dims[2]});
        spec.n = n + (n % 2);
    }
    const double sigma = field.sigma();
    const double k_max = spec.k_max.value_or(8.0 / sigma);
    if (!(k_max * sigma >= 4.0)) {
        std::ostringstream msg;
        msg << "spectral_transform: grid too coarse, k_max*sigma = " << k_max * sigma << " < 4";
        throw ValidationError(msg.str());
    }
    const LatticeSpec lat = lattice_around(field.center(), spec.n, k_max);
    if (lat.box_length() < 2.0 * field.effective_radius()) {
        std::ostringstream msg;
        msg << "spectral_transform: box length " << lat.box_length() << " below support diameter "
            << 2.0 * field.effective_radius() << "; need n >= "
            << std::ceil(2.0 * field.effective_radius() / lat.dx()) << " at k_max = " << k_max;
        throw ValidationError(msg.str());
    }

    return spectral_transform_on(field, lat);
}

SpectralField spectral_transform_on(const ShapeField& field, const LatticeSpec& lat) {
    auto nodes = KNodes::lattice(lat);
    const std::size_t n = lat.n;
    const std::size_t total = n * n * n;
    std::vector<CVec3> values(total);
    if (const auto* cg = field.curl_gaussian()) {
        for (std::size_t i = 0; i < total; ++i)
            if (nodes->mirror(i)) values[i] = curl_gaussian_transform(*cg, nodes->k(i));
        return SpectralField::on_nodes(std::move(nodes), std::move(values));
    }
    std::array<std::vector<Complex>, 3> comp;
    for (auto& c : comp) c.assign(total, Complex{});
    const double dx = lat.dx();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
                const Vec3 x = lat.origin + dx * Vec3{static_cast<double>(a), static_cast<double>(b), static_cast<double>(c)};
                const Vec3 v = field.value(x);
                const std::size_t i = lattice_index(a, b, c, n);
                comp[0][i] = v.x;
                comp[1][i] = v.y;
                comp[2][i] = v.z;
            }
    for (auto& c : comp) fft::transform_3d(c, n, true);

    const double vol = dx * dx * dx;
    for (std::size_t i = 0; i < total; ++i) {
        if (!nodes->mirror(i)) continue;  // Nyquist planes have no Hermitian partner
        const Complex ph = vol * std::polar(1.0, -dot(nodes->k(i), lat.origin));
        values[i] = {comp[0][i] * ph, comp[1][i] * ph, comp[2][i] * ph};
    }
    return SpectralField::on_nodes(std::move(nodes), std::move(values));
}

VectorGrid inverse_transform(const SpectralField& sf) {
    if (!sf.nodes() || !sf.nodes()->lattice_spec())
        throw ValidationError("inverse_transform: requires a lattice spectral field");
    const LatticeSpec lat = *sf.nodes()->lattice_spec();
    const std::size_t n = lat.n;
    const std::size_t total = n * n * n;
    std::array<std::vector<Complex>, 3> comp;
    for (auto& c : comp) c.assign(total, Complex{});
    const double dk = lat.dk();
    const double norm_factor = dk * dk * dk / std::pow(2.0 * kPi, 3);
    for (std::size_t i = 0; i < total; ++i) {
        const Complex ph = norm_factor * std::polar(1.0, dot(sf.nodes()->k(i), lat.origin));
        for (int d = 0; d < 3; ++d) comp[d][i] = sf.values()[i][d] * ph;
    }
    for (auto& c : comp) fft::transform_3d(c, n, false);
    VectorGrid g;
    g.dims = {n, n, n};
    g.origin = lat.origin;
    g.spacing = lat.dx();
    g.values.resize(total);
    for (std::size_t i = 0; i < total; ++i) g.values[i] = {comp[0][i].real(), comp[1][i].real(), comp[2][i].real()};
    return g;
}

// ---------------------------------------------------------------------------
// Checks
// ---------------------------------------------------------------------------

DivergenceReport check_divergence_free(const ShapeField& field, double tol) {
    DivergenceReport rep;
    double peak = 0.0;
    const double sigma = field.sigma();
    if (const auto* cg = field.curl_gaussian()) {
        const double h = sigma / 8.0;
        const int m = 32;  // +-4 sigma
        for (int i = -m; i <= m; ++i)
            for (int j = -m; j <= m; ++j)
                for (int k = -m; k <= m; ++k) {
                    const Vec3 x = cg->center + h * Vec3{double(i), double(j), double(k)};
                    peak = std::max(peak, norm(curl_gaussian_value(*cg, x)));
                    double div = 0.0;
                    for (int d = 0; d < 3; ++d) {
                        Vec3 e{};
                        e[d] = h;
                        const double fp1 = curl_gaussian_value(*cg, x + e)[d];
                        const double fm1 = curl_gaussian_value(*cg, x - e)[d];
                        const double fp2 = curl_gaussian_value(*cg, x + 2.0 * e)[d];
                        const double fm2 = curl_gaussian_value(*cg, x - 2.0 * e)[d];
                        div += (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
                    }
                    rep.max_residual = std::max(rep.max_residual, std::abs(div));
                }
    } else {
        const VectorGrid& g = *field.grid();
        const double s = field.grid_scale();
        const double h = g.spacing;
        for (const auto& v : g.values) peak = std::max(peak, std::abs(s) * norm(v));
        if (g.dims[0] >= 5 && g.dims[1] >= 5 && g.dims[2] >= 5) {
            for (std::size_t i = 2; i + 2 < g.dims[0]; ++i)
                for (std::size_t j = 2; j + 2 < g.dims[1]; ++j)
                    for (std::size_t k = 2; k + 2 < g.dims[2]; ++k) {
                        auto at = [&](std::size_t a, std::size_t b, std::size_t c, int d) {
                            return s * g.values[g.index(a, b, c)][d];
                        };
                        const double dxf = (-at(i + 2, j, k, 0) + 8.0 * at(i + 1, j, k, 0) - 8.0 * at(i - 1, j, k, 0) +
                                            at(i - 2, j, k, 0)) / (12.0 * h);
                        const double dyf = (-at(i, j + 2, k, 1) + 8.0 * at(i, j + 1, k, 1) - 8.0 * at(i, j - 1, k, 1) +
                                            at(i, j - 2, k, 1)) / (12.0 * h);
                        const double dzf = (-at(i, j, k + 2, 2) + 8.0 * at(i, j, k + 1, 2) - 8.0 * at(i, j, k - 1, 2) +
                                            at(i, j, k - 2, 2)) / (12.0 * h);
                        rep.max_residual = std::max(rep.max_residual, std::abs(dxf + dyf + dzf));
                    }
        }
    }
    rep.threshold = tol * peak / sigma;
    rep.pass = rep.max_residual <= rep.threshold;
    return rep;
}

CVec3 transverse_project(const Vec3& k, const CVec3& v) {
    const double k2 = norm2(k);
    if (k2 == 0.0) return {};
    const Complex kv = bdot(k, v);
    return v - to_complex(k) * (kv / k2);
}

SpectralField transverse_project(const SpectralField& sf) {
    if (sf.representation() == SpectralRepresentation::ClosedForm) return sf;
    std::vector<CVec3> v = sf.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = transverse_project(sf.nodes()->k(i), v[i]);
    return SpectralField::on_nodes(sf.nodes(), std::move(v));
}

SpectralInvariants check_spectral_invariants(const SpectralField& sf) {
    SpectralInvariants out;
    if (sf.representation() == SpectralRepresentation::ClosedForm) return out;
    const KNodes& nodes = *sf.nodes();
    const auto& v = sf.values();
    double peak = 0.0;
    for (const auto& x : v) peak = std::max(peak, norm(x));
    if (peak == 0.0) return out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec3 k = nodes.k(i);
        const double kn = norm(k);
        if (kn == 0.0) {
            out.zero_mode = std::max(out.zero_mode, norm(v[i]) / peak);
            continue;
        }
        out.max_longitudinal = std::max(out.max_longitudinal, std::abs(bdot(k, v[i])) / (kn * peak));
        if (auto j = nodes.mirror(i)) out.max_hermitian_defect = std::max(out.max_hermitian_defect, norm(v[*j] - conj(v[i])) / peak);
    }
    return out;
}

}  // namespace qet
