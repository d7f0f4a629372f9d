#pragma once

#include <cstddef>
#include <functional>

namespace qet::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;      // summed per-panel error estimates
    double l1 = 0.0;         // integral of |f|, for judging cancellation
    std::size_t panels = 0;
};

// Integrates f over [a, b] split into equal panels no wider than max_panel,
// each handled by tanh-sinh. Choose max_panel at most one oscillation period
// for oscillatory integrands.
Result panel_tanh_sinh(const std::function<double(double)>& f, double a, double b, double max_panel,
                       double rel_tol = 1e-14);

}  // namespace qet::quad
