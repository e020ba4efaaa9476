#include "modcurv/errors.hpp"
#include "modcurv/cosphere.hpp"
#include "modcurv/modular.hpp"
#include "modcurv/quadrature.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>

using namespace modcurv;

namespace {

Monomial single(const std::string& text) {
    const Expression e = parse_expression(text);
    REQUIRE(e.terms().size() == 1);
    return e.terms().front();
}

SymbolicFunction F(const std::string& s) { return parse_symbolic_function(s); }

}  // namespace

TEST_CASE("signature of a Hessian term") {
    const auto sig = extract_signature(single("-1 * b0^2 * k * HessK[a,b] * b0 * Xi2 * Ginv[a,b]"), 2);
    CHECK(sig.channel == Channel::Hessian);
    CHECK(sig.b0_exponents == std::vector<int>{2, 1});
    CHECK(sig.k_exponents == std::vector<int>{1, 0});
    CHECK(sig.r_power == 1);
    CHECK(sig.shift_s == 0);
    CHECK(sig.shift_t == 0);
    CHECK(sig.prefactor == -1);
    CHECK(sig.k_total == -1);
}

TEST_CASE("signature with a modular shift") {
    const auto sig =
        extract_signature(single("2 * b0^2 * k * GradK[a] * b0^2 * k * GradK[b] * b0 * Xi2^3 * Ginv[a,b]"), 2);
    CHECK(sig.channel == Channel::GradientPair);
    CHECK(sig.b0_exponents == std::vector<int>{2, 2, 1});
    CHECK(sig.r_power == 3);
    CHECK(sig.shift_s == 1);
    CHECK(sig.shift_t == 0);
    CHECK(sig.k_total == -2);
}

TEST_CASE("signature without shifts") {
    const auto sig = extract_signature(single("b0^3 * k^2 * GradK[a] * b0 * GradK[b] * b0 * Xi2^3 * Ginv[a,b]"), 4);
    CHECK(sig.b0_exponents == std::vector<int>{3, 1, 1});
    CHECK(sig.r_power == 3);
    CHECK(sig.shift_s == 0);
    CHECK(sig.shift_t == 0);
    CHECK(sig.k_total == -3);
}

TEST_CASE("k-power pattern for every term") {
    for (auto [m, op] : {std::pair{2, OperatorKind::KDelta}, {4, OperatorKind::KDelta}, {6, OperatorKind::KDelta},
                         {4, OperatorKind::NC4Tori}}) {
        const auto sym = op == OperatorKind::KDelta ? kdelta_symbols() : nc4tori_symbols();
        const Expression avg = sphere_average(resolvent_b(2, sym), m);
        for (const auto& t : avg.terms()) {
            const auto sig = extract_signature(t, m);
            const int want = sig.channel == Channel::Hessian        ? -m / 2
                             : sig.channel == Channel::GradientPair ? -m / 2 - 1
                                                                    : -m / 2 + 1;
            CHECK(sig.k_total == want);
        }
        const auto rep = derive_curvature(m, op);
        CHECK(rep.k_powers.hessian == -m / 2);
        CHECK(rep.k_powers.gradient_pair == -m / 2 - 1);
        CHECK(rep.k_powers.scalar == -m / 2 + 1);
    }
}

TEST_CASE("unsupported signatures") {
    CHECK_THROWS_AS(
        extract_signature(single("b0 * HessK[a,b] * b0 * HessK[c,d] * b0 * Xi2^4 * Ginv[a,b] * Ginv[c,d]"), 2),
        UnsupportedSignature);
    CHECK_THROWS_AS(extract_signature(single("b0^2 * DXi2[a] * GradK[a] * b0"), 2), UnsupportedSignature);
}

TEST_CASE("family integrals in dimension two") {
    CHECK(family_integral_dim2({1, 1}) == F("log(s)/(s-1)"));
    CHECK(eval_function(family_integral_dim2({2}), 1.0) == doctest::Approx(1.0));
    CHECK(eval_function(family_integral_dim2({1, 1}), 1.0) == doctest::Approx(1.0));
    for (double s : {0.5, 2.0, 7.0})
        CHECK(std::abs(eval_function(family_integral_dim2({1, 1}), s) - std::log(s) / (s - 1)) < 1e-12);
    for (double s : {0.3, 4.0})
        for (double t : {0.6, 2.5})
            CHECK(eval_function(family_integral_dim2({2, 2, 1}), s, t) ==
                  doctest::Approx(quad_r_integral({2, 2, 1}, s, t)).epsilon(1e-10));
    CHECK_THROWS_AS(family_integral_dim2({1}), DivergentIntegral);
}

TEST_CASE("family integrals in higher dimension") {
    CHECK(family_integral_dim_m({3, 1}, 4) == F("1/s"));
    CHECK(family_integral_dim_m({1, 1}, 4) == F("1/s"));
    CHECK(family_integral_dim_m({2, 2, 1}, 4) == F("1/(s^3*t)"));
    CHECK(eval_function(family_integral_dim_m({2, 1}, 6), 1.0) == doctest::Approx(3.0));
    TermSignature sig;
    sig.prefactor = 1;
    sig.b0_exponents = {2, 1};
    CHECK_THROWS_AS(integrate_dim_m(sig, 3), UsageError);
    CHECK_THROWS_AS(integrate_dim_m(sig, 2), UsageError);
}

TEST_CASE("dimension two aggregate") {
    const auto rep = derive_curvature(2, OperatorKind::KDelta);
    CHECK(rep.K == F("(-2*s + (s+1)*log(s) + 2) / (2*(s-1)^3)"));
    CHECK(std::abs(eval_function(rep.K, 2.0) - (3 * std::log(2.0) - 2) / 2) < 1e-13);
    CHECK(std::abs(eval_function(rep.K, 1.0) - 1.0 / 12) < 1e-8);
    CHECK(std::isfinite(eval_function(rep.G, 1.0, 1.0)));
    CHECK(rep.normalization.volume_coefficient == 2);
    CHECK(rep.normalization.two_pi_power == -2);
}

TEST_CASE("dimension four aggregate") {
    const auto rep = derive_curvature(4, OperatorKind::KDelta);
    CHECK(rep.K.is_zero());
    CHECK(rep.G.is_zero());
    CHECK(rep.F1 == Rational(1, 2));
    CHECK(rep.c_scalar_normalized == Rational(1, 96));
    CHECK_THROWS_AS(derive_curvature(2, OperatorKind::NC4Tori), UsageError);
    CHECK_THROWS_AS(derive_curvature(5, OperatorKind::KDelta), UsageError);
}

TEST_CASE("nc4tori report records the sign question") {
    const auto rep = derive_curvature(4, OperatorKind::NC4Tori);
    CHECK_FALSE(rep.notes.empty());
    CHECK_FALSE(rep.K.uses_t());
    CHECK(report_text(rep).find("note:") != std::string::npos);
}

TEST_CASE("report serialization") {
    const auto rep = derive_curvature(2, OperatorKind::KDelta);
    const auto j = nlohmann::json::parse(report_json(rep));
    for (const char* key : {"dim", "operator", "normalization", "k_powers", "K", "G", "c_scalar"})
        CHECK(j.contains(key));
    CHECK(j["dim"] == 2);
    CHECK(F(j["K"].get<std::string>()) == rep.K);
    CHECK(F(j["G"].get<std::string>()) == rep.G);
    const std::string text = report_text(rep);
    CHECK(text.find("dim: 2") != std::string::npos);
    CHECK(text.find("c_scalar: 1/12") != std::string::npos);
}

TEST_CASE("operator names") {
    CHECK(parse_operator("kdelta") == OperatorKind::KDelta);
    CHECK(parse_operator("nc4tori") == OperatorKind::NC4Tori);
    CHECK(operator_name(OperatorKind::NC4Tori) == "nc4tori");
    CHECK_THROWS_AS(parse_operator("laplace"), UsageError);
}
