#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qet/field_model.hpp"

namespace qet {

// Cubic frame grid of n^3 nodes spanning center +- half_extent.
struct FrameGrid {
    std::size_t n = 128;
    double half_extent = 0.0;
    Vec3 center{};

    double spacing() const { return 2.0 * half_extent / static_cast<double>(n); }
    Vec3 origin() const { return center - Vec3{half_extent, half_extent, half_extent}; }
};

// Default grid for a frame at time t_max: n = 128, half-extent 1.25 (t_max + 2R),
// centered on the field.
FrameGrid default_frame_grid(const ShapeField& a_m, double t_max);

// Mean energy density of the displaced state |(0, a_m)> under free evolution.
struct DensityFrame {
    double t = 0.0;
    FrameGrid grid;
    std::vector<double> eps;  // (Pi^2 + b^2) / 2
    std::vector<Vec3> b;
    std::vector<Vec3> Pi;

    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return (i * grid.n + j) * grid.n + k; }
    Vec3 node(std::size_t i, std::size_t j, std::size_t k) const {
        const double h = grid.spacing();
        return grid.origin() + h * Vec3{static_cast<double>(i), static_cast<double>(j), static_cast<double>(k)};
    }
};

// Throws ValidationError when the grid under-resolves sigma (k_max sigma < 4)
// or the light shell |x - c| <= t + R leaves the box.
DensityFrame energy_density_frame(const ShapeField& a_m, double t, std::optional<FrameGrid> grid = std::nullopt);

double total_energy(const DensityFrame& frame);

// \int w(x) eps(T, x) d^3x
double residual_window_energy(const ShapeField& a_m, double T, const WindowFunction& window,
                              std::optional<FrameGrid> grid = std::nullopt);
double window_energy(const DensityFrame& frame, const WindowFunction& window);

// Fraction of the frame's energy with inner <= |x - center| <= outer.
double shell_energy_fraction(const DensityFrame& frame, const Vec3& center, double inner, double outer);

}  // namespace qet
