#pragma once

#include <functional>
#include <vector>

namespace modcurv {

struct QuadratureSpec {
    double abs_tol = 1e-12;
    int max_depth = 30;
};

struct QuadratureResult {
    double value = 0;
    double error = 0;  // accumulated |K15 − G7| estimate
    bool converged = true;
};

// Adaptive Gauss–Kronrod 7/15 on [a, b].
QuadratureResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureSpec& spec);
// ∫₀^∞ f(r) dr through r = u/(1−u).
QuadratureResult integrate_half_line(const std::function<double(double)>& f, const QuadratureSpec& spec);

// ∫₀^∞ r^{Σn−2} Π_i (σ_i r + 1)^{−n_i} dr with σ = (1, s, st); K(p,q) is {p,q}, H(p,q,l) is {p,q,l}.
double quad_r_integral(const std::vector<int>& exps, double s, double t, const QuadratureSpec& spec = {});

// ∫₀^∞ r^{Σn+m/2−3} ∂_λ^{m/2−1} Π_i (σ_i r − λ)^{−n_i}|_{λ=−1} dr
double quad_r_integral_dim_m(const std::vector<int>& exps, double s, double t, int m,
                             const QuadratureSpec& spec = {});

}  // namespace modcurv
