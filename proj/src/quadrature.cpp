#include "qet/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace qet::quad {

Result panel_tanh_sinh(const std::function<double(double)>& f, double a, double b, double max_panel,
                       double rel_tol) {
    Result out;
    if (!(b > a)) return out;
    thread_local boost::math::quadrature::tanh_sinh<double> integrator;
    const std::size_t panels =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((b - a) / max_panel)));
    const double h = (b - a) / static_cast<double>(panels);
    for (std::size_t i = 0; i < panels; ++i) {
        const double lo = a + h * static_cast<double>(i);
        const double hi = (i + 1 == panels) ? b : lo + h;
        double err = 0.0;
        double l1 = 0.0;
        out.value += integrator.integrate(f, lo, hi, rel_tol, &err, &l1);
        out.error += err;
        out.l1 += l1;
    }
    out.panels = panels;
    return out;
}

}  // namespace qet::quad
