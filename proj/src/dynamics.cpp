#include "qet/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "qet/errors.hpp"
#include "qet/reduction.hpp"

namespace qet {

FrameGrid default_frame_grid(const ShapeField& a_m, double t_max) {
    return FrameGrid{128, 1.25 * (std::abs(t_max) + 2.0 * a_m.effective_radius()), a_m.center()};
}

DensityFrame energy_density_frame(const ShapeField& a_m, double t, std::optional<FrameGrid> grid) {
    const FrameGrid g = grid.value_or(default_frame_grid(a_m, t));
    if (g.n < 4 || g.n % 2 != 0) throw ValidationError("frame grid: n must be even and at least 4");
    if (!(g.half_extent > 0.0)) throw ValidationError("frame grid: half_extent must be positive");
    const double k_max = std::numbers::pi / g.spacing();
    if (k_max * a_m.sigma() < 4.0) {
        std::ostringstream msg;
        msg << "frame grid: spacing " << g.spacing() << " does not resolve sigma = " << a_m.sigma()
            << " (k_max sigma = " << k_max * a_m.sigma() << " < 4); need n >= "
            << std::ceil(8.0 * g.half_extent / (std::numbers::pi * a_m.sigma()));
        throw ValidationError(msg.str());
    }
    const double reach = norm(a_m.center() - g.center) + std::abs(t) + a_m.effective_radius();
    if (g.half_extent < reach) {
        std::ostringstream msg;
        msg << "frame grid: light shell reaches " << reach << " from the grid center but half_extent is "
            << g.half_extent << "; required half_extent >= " << reach;
        throw ValidationError(msg.str());
    }

    const LatticeSpec lat{g.n, k_max, g.origin()};
    const SpectralField a = spectral_transform_on(a_m, lat);
    const KNodes& nodes = *a.nodes();
    std::vector<CVec3> bt(nodes.size()), pt(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Vec3 k = nodes.k(i);
        const double kn = norm(k);
        const CVec3& v = a.values()[i];
        bt[i] = cross(k, v) * Complex(0.0, std::cos(kn * t));
        pt[i] = v * (-kn * std::sin(kn * t));
    }
    const VectorGrid b = inverse_transform(SpectralField::on_nodes(a.nodes(), std::move(bt)));
    const VectorGrid p = inverse_transform(SpectralField::on_nodes(a.nodes(), std::move(pt)));

    DensityFrame f;
    f.t = t;
    f.grid = g;
    f.b = b.values;
    f.Pi = p.values;
    f.eps.resize(f.b.size());
    for (std::size_t i = 0; i < f.eps.size(); ++i) f.eps[i] = 0.5 * (norm2(f.Pi[i]) + norm2(f.b[i]));
    return f;
}

double total_energy(const DensityFrame& frame) {
    const double h = frame.grid.spacing();
    return h * h * h * pairwise_sum(frame.eps);
}

double window_energy(const DensityFrame& frame, const WindowFunction& window) {
    const double h = frame.grid.spacing();
    const std::size_t n = frame.grid.n;
    return h * h * h * deterministic_sum(frame.eps.size(), [&](std::size_t i) {
        const std::size_t c = i % n, b = (i / n) % n, a = i / (n * n);
        return window.value(frame.node(a, b, c)) * frame.eps[i];
    });
}

double residual_window_energy(const ShapeField& a_m, double T, const WindowFunction& window,
                              std::optional<FrameGrid> grid) {
    return window_energy(energy_density_frame(a_m, T, grid), window);
}

double shell_energy_fraction(const DensityFrame& frame, const Vec3& center, double inner, double outer) {
    const std::size_t n = frame.grid.n;
    const double inside = deterministic_sum(frame.eps.size(), [&](std::size_t i) {
        const std::size_t c = i % n, b = (i / n) % n, a = i / (n * n);
        const double r = norm(frame.node(a, b, c) - center);
        return (r >= inner && r <= outer) ? frame.eps[i] : 0.0;
    });
    const double total = pairwise_sum(frame.eps);
    return total == 0.0 ? 0.0 : inside / total;
}

}  // namespace qet
