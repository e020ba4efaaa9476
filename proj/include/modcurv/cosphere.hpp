#pragma once

#include "modcurv/symbol_engine.hpp"

#include <vector>

namespace modcurv {

// Mean of ξ^α over the unit sphere S^{m−1}:
// Π(α_i − 1)!! / (m(m+2)…(m+|α|−2)) when every α_i is even, else 0.
Rational sphere_moment(const std::vector<int>& alpha, int m);

// Composite substitution coefficients, each multiplying |ξ|² (Vol(S^{m−1}) factored out).
struct SphereRules {
    int m = 0;
    Rational dd;       // D|ξ|² ⊗ D|ξ|²            ↦ dd · |ξ|² g^{-1}
    Rational d2;       // D²|ξ|²                    ↦ d2 · g^{-1}          (no |ξ|²)
    Rational d_d2_l3;  // (D|ξ|²)(D²|ξ|²)(∇³ℓ)      ↦ d_d2_l3 · |ξ|² 𝒮
    Rational d2_n2;    // (D²|ξ|²)(∇²|ξ|²)          ↦ d2_n2 · |ξ|² 𝒮
    Rational dd_n2;    // (D|ξ|²)²(∇²|ξ|²)          ↦ dd_n2 · |ξ|⁴ 𝒮
};

// Derived from sphere_moment and an algebraic curvature tensor model.
SphereRules derive_sphere_rules(int m);

Expression sphere_average(const Expression& e, int m);

}  // namespace modcurv
