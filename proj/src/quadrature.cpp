#include "twistbeam/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "twistbeam/errors.hpp"

namespace twistbeam {

namespace {

// L_n(u) and L_n'(u), plain Laguerre (α = 0), uncapped order for internal use.
struct LagEval {
    double value;
    double derivative;
};

LagEval laguerre_with_derivative(int n, double u) {
    double lm1 = 1.0;           // L_0
    double lm0 = 1.0 - u;       // L_1
    if (n == 0) return {1.0, 0.0};
    for (int j = 1; j < n; ++j) {
        const double next = ((2.0 * j + 1.0 - u) * lm0 - j * lm1) / (j + 1.0);
        lm1 = lm0;
        lm0 = next;
    }
    // u·L_n'(u) = n·L_n(u) − n·L_{n−1}(u)
    const double deriv = n * (lm0 - lm1) / u;
    return {lm0, deriv};
}

} // namespace

QuadratureRule gauss_laguerre(int n) {
    if (n < 1 || n > 160)
        throw ValidationError("gauss_laguerre: order must be in [1, 160]");

    // Jacobi matrix of the Laguerre recurrence: diag 2i+1, offdiag i.
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        jacobi(i, i) = 2.0 * i + 1.0;
        if (i > 0) {
            jacobi(i - 1, i) = static_cast<double>(i);
            jacobi(i, i - 1) = static_cast<double>(i);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
    if (eig.info() != Eigen::Success)
        throw ConvergenceError("gauss_laguerre: eigensolver failed");

    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double u = eig.eigenvalues()(i);
        // Two Newton polish steps on L_n(u) = 0.
        for (int it = 0; it < 2; ++it) {
            const auto lag = laguerre_with_derivative(n, u);
            const double step = lag.value / lag.derivative;
            if (std::isfinite(step)) u -= step;
        }
        const auto next = laguerre_with_derivative(n + 1, u);
        const double d = (n + 1.0) * next.value;
        rule.nodes[i] = u;
        rule.weights[i] = u / (d * d);
    }
    return rule;
}

} // namespace twistbeam
