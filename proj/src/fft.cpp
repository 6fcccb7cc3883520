#include "twistbeam/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <vector>

#include "twistbeam/constants.hpp"
#include "twistbeam/errors.hpp"

namespace twistbeam {

namespace {
// FFTW plan creation is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

Fft2D::Fft2D(int ny, int nx) : ny_(ny), nx_(nx) {
    if (nx < 1 || ny < 1) throw ValidationError("Fft2D: sizes must be >= 1");
    std::vector<std::complex<double>> scratch(static_cast<std::size_t>(nx) * ny);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd_ = fftw_plan_dft_2d(ny, nx, buf, buf, FFTW_FORWARD,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
    inv_ = fftw_plan_dft_2d(ny, nx, buf, buf, FFTW_BACKWARD,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (fwd_ == nullptr || inv_ == nullptr) throw ConvergenceError("Fft2D: planning failed");
}

Fft2D::~Fft2D() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(inv_));
}

void Fft2D::forward(std::complex<double>* data) const {
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(fwd_), buf, buf);
}

void Fft2D::inverse(std::complex<double>* data) const {
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(inv_), buf, buf);
    const double scale = 1.0 / (static_cast<double>(nx_) * static_cast<double>(ny_));
    const std::size_t count = static_cast<std::size_t>(nx_) * ny_;
    for (std::size_t i = 0; i < count; ++i) data[i] *= scale;
}

double fft_frequency(int i, int n, double d) {
    const int f = (i <= n / 2) ? i : i - n;
    return 2.0 * constants::pi * f / (n * d);
}

} // namespace twistbeam
