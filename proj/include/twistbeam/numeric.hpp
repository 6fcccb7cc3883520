#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>

namespace twistbeam {

/// Compensated (Kahan) accumulator. Large grid reductions must not lose
/// digits to naive summation; the acceptance tolerances sit at 1e-10.
class KahanSum {
public:
    void add(double x) {
        const double y = x - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    [[nodiscard]] double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class KahanSumComplex {
public:
    void add(std::complex<double> x) {
        re_.add(x.real());
        im_.add(x.imag());
    }
    [[nodiscard]] std::complex<double> value() const { return {re_.value(), im_.value()}; }

private:
    KahanSum re_, im_;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
};

/// Ordinary least squares y = intercept + slope·x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

inline double relative_diff(double a, double b) {
    const double scale = std::fmax(std::fabs(a), std::fabs(b));
    return scale == 0.0 ? 0.0 : std::fabs(a - b) / scale;
}

} // namespace twistbeam
