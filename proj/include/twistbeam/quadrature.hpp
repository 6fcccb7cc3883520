#pragma once

#include <vector>

namespace twistbeam {

/// Nodes and weights for ∫₀^∞ e^{−u} f(u) du ≈ Σ wᵢ f(uᵢ), exact when f is a
/// polynomial of degree ≤ 2n−1.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Laguerre rule of order n (weight e^{−u} on [0, ∞)). Nodes come from
/// the Golub-Welsch tridiagonal eigenproblem and are polished by Newton steps
/// on the recurrence; weights use wᵢ = uᵢ/((n+1)·L_{n+1}(uᵢ))².
/// Supported for 1 ≤ n ≤ 160.
QuadratureRule gauss_laguerre(int n);

} // namespace twistbeam
