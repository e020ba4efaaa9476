#pragma once

#include "modcurv/quadrature.hpp"
#include "modcurv/symbolic_function.hpp"
#include "modcurv/theta_algebra.hpp"

#include <cstdint>
#include <vector>

namespace modcurv {

// Family K(p,q) ({p,q}) or H(p,q,l) ({p,q,l}); the closed form is multiplied by s^shift_s.
struct FamilySpec {
    std::vector<int> exps;
    int shift_s = 0;
};

// Rearrangement identity on a random positive matrix k of size `dim` (eigenvalues in [0.2, 5]):
//   one ρ:  ∫₀^∞ k f₀(rk) ρ f₁(rk) dr            = 𝒦(Δ)(ρ)
//   two ρ:  ∫₀^∞ k f₀(rk) ρ₁ f₁(rk) ρ₂ f₂(rk) dr  = 𝒢(Δ₍₁₎,Δ₍₂₎)(ρ₁ρ₂)
// with f₀ = x^{w−j}(x+1)^{−p}, f₁ = x^j(x+1)^{−q}, f₂ = (x+1)^{−l}, j = shift_s.
// Returns max|L − R| / max|R|.
double matrix_rearrangement_check(int dim, std::uint64_t seed, const FamilySpec& family,
                                  const QuadratureSpec& spec = {});
// Same check with k = diag(eigenvalues) and the given ρ's (row-major, dim × dim each).
double matrix_rearrangement_check(const std::vector<double>& eigenvalues,
                                  const std::vector<std::vector<double>>& rhos, const FamilySpec& family,
                                  const QuadratureSpec& spec = {});

// |τ(R̃)| for k = exp(h) on the flat 2-torus, where
//   R̃ = k^{−1} 𝒦(Δ)(Σ_j δ_j²k) + k^{−2} 𝒢(Δ₍₁₎,Δ₍₂₎)(Σ_j δ_jk·δ_jk),  log Δ = −ad_h.
// K and G default to the dim-2 pipeline output.
double gauss_bonnet_residual(const FloatElement& h, const SkewMatrix& theta, int series_order, int support_cap);
double gauss_bonnet_residual(const FloatElement& h, const SkewMatrix& theta, int series_order, int support_cap,
                             const SymbolicFunction& K, const SymbolicFunction& G);

struct ScalingResult {
    double base = 0;
    std::vector<double> eps;
    std::vector<double> residuals;
    bool pass = false;
};
// residual(εh) ≤ 2ε²·residual(h) + floor for ε ∈ {1/2, 1/4}
ScalingResult gauss_bonnet_scaling(const FloatElement& h, const SkewMatrix& theta, int series_order,
                                   int support_cap, double floor = 1e-12);

}  // namespace modcurv

namespace modcurv {

// Self-adjoint sample on the 2-torus with ℓ1 norm `norm`:
// modes (±1,0), (0,±1), (±1,±1) with weights 2 : 2 : 1.
FloatElement sample_weyl_log(double norm);

}  // namespace modcurv
