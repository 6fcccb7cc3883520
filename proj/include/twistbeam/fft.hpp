#pragma once

#include <complex>

namespace twistbeam {

/// In-place 2D complex FFT (FFTW backend). Plans are created once per size
/// with FFTW_ESTIMATE, which keeps transforms deterministic across runs.
/// forward() is unnormalized; inverse() divides by nx·ny.
class Fft2D {
public:
    Fft2D(int ny, int nx);
    ~Fft2D();
    Fft2D(const Fft2D&) = delete;
    Fft2D& operator=(const Fft2D&) = delete;

    void forward(std::complex<double>* data) const;
    void inverse(std::complex<double>* data) const;

    [[nodiscard]] int nx() const { return nx_; }
    [[nodiscard]] int ny() const { return ny_; }

private:
    int ny_, nx_;
    void* fwd_;  // fftw_plan
    void* inv_;
};

/// Angular spatial frequency of FFT bin i for n samples of spacing d:
/// 2π·i/(n·d) for i ≤ n/2, negative branch above.
double fft_frequency(int i, int n, double d);

} // namespace twistbeam
