#include "qet/fft.hpp"

#include <mutex>

#include <fftw3.h>

#include "qet/errors.hpp"

namespace qet::fft {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

void transform_3d(std::span<std::complex<double>> data, std::size_t n, bool forward) {
    if (data.size() != n * n * n) throw ValidationError("fft: buffer size does not match n^3");
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        // Planning is not thread-safe in FFTW; execution is.
        std::lock_guard lock(planner_mutex());
        const int ni = static_cast<int>(n);
        plan = fftw_plan_dft_3d(ni, ni, ni, buf, buf, forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                FFTW_ESTIMATE);
    }
    if (plan == nullptr) throw Error("fft: planning failed");
    fftw_execute(plan);
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
}

}  // namespace qet::fft
