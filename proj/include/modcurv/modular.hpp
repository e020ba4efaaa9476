#pragma once

#include "modcurv/symbol_engine.hpp"
#include "modcurv/symbolic_function.hpp"

#include <string>
#include <vector>

namespace modcurv {

enum class Channel { Hessian, GradientPair, Scalar };
enum class OperatorKind { KDelta, NC4Tori };

std::string channel_name(Channel c);
std::string operator_name(OperatorKind op);
OperatorKind parse_operator(const std::string& name);

// Fingerprint of a sphere-averaged scalar term
//   prefactor · b₀^{p₀}k^{a₀} ρ₁ b₀^{p₁}k^{a₁} ρ₂ b₀^{p₂}k^{a₂} · |ξ|^{2w} · (contraction)
// Run i sits at modular variable σ_i ∈ (1, s, st).
struct TermSignature {
    Rational prefactor{0};
    Channel channel = Channel::Scalar;
    std::vector<int> b0_exponents;
    std::vector<int> k_exponents;  // k^{-1} counts as −1
    std::vector<AtomKind> rho_factors;
    int r_power = 0;
    int k_total = 0;  // net k-power in front after integration
    int shift_s = 0;  // j₁
    int shift_t = 0;  // j₂

    std::string str() const;
};

TermSignature extract_signature(const Monomial& term, int m);

// ∫₀^∞ r^{Σn−2} Π_i (σ_i r + 1)^{−n_i} dr, σ = (1, s, st) truncated to exps.size().
// Zero exponents are allowed; the ½ from r ↦ r² is not included.
SymbolicFunction family_integral_dim2(const std::vector<int>& exps);
// (d/du)^{m/2−2}|_{u=0} Π_i (σ_i − u)^{−n_i}
SymbolicFunction family_integral_dim_m(const std::vector<int>& exps, int m);

// prefactor · s^{j₁} t^{j₂} · ½ · family
SymbolicFunction integrate_dim2(const TermSignature& sig);
SymbolicFunction integrate_dim_m(const TermSignature& sig, int m);

struct KPowers {
    int hessian = 0;
    int gradient_pair = 0;
    int scalar = 0;
};

struct Normalization {
    // Vol(S^{m−1}) = volume_coefficient · π^{m/2}
    Rational volume_coefficient{0};
    int two_pi_power = 0;  // (2π)^{two_pi_power}
    bool half_included = true;
};

struct CurvatureReport {
    int dim = 0;
    OperatorKind op = OperatorKind::KDelta;
    SymbolicFunction K;
    SymbolicFunction G;
    Rational c_scalar{0};
    Rational scalar_term_coefficient{0};  // coefficient of b₀³k²𝒮|ξ|² after averaging
    Rational F1{0};                       // c_scalar / scalar_term_coefficient
    // c_scalar · Vol(S^{m−1}) · (2π)^{−m} = c_scalar_normalized · π^{−m/2}
    Rational c_scalar_normalized{0};
    KPowers k_powers;
    Normalization normalization;
    std::size_t term_count = 0;
    std::vector<std::string> notes;
};

CurvatureReport derive_curvature(int m, OperatorKind op);

std::string report_text(const CurvatureReport& r);
std::string report_json(const CurvatureReport& r);

}  // namespace modcurv
