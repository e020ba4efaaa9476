#include "modcurv/errors.hpp"
#include "modcurv/polynomial.hpp"
#include "modcurv/series.hpp"
#include "modcurv/symbolic_function.hpp"

#include <doctest.h>

#include <cmath>

using namespace modcurv;

namespace {
SymbolicFunction F(const std::string& s) { return parse_symbolic_function(s); }
}  // namespace

TEST_CASE("rationals") {
    CHECK(parse_rational("-3/6") == Rational(-1, 2));
    CHECK(to_string(Rational(7) / Rational(-14)) == "-1/2");
    CHECK(binomial(-2, 3) == -4);
    CHECK(factorial(5) == 120);
    CHECK(parse_gauss_rational("1/2i") == GaussRational(Rational(0), Rational(1, 2)));
}

TEST_CASE("polynomials and factors") {
    const Poly2 s = Poly2::s(), t = Poly2::t();
    const Poly2 p = (s * t - Poly2(1)).pow(2);
    Poly2 q;
    REQUIRE(divide_by_factor(p, Factor::STM1, q));
    CHECK(q == s * t - Poly2(1));
    CHECK_FALSE(divide_by_factor(p, Factor::SM1, q));
    CHECK(p.eval(2.0, 3.0) == doctest::Approx(25.0));
}

TEST_CASE("parse and print round trip") {
    for (const char* text : {"(-2*s + (s+1)*log(s) + 2) / (2*(s-1)^3)", "1/(s^3*t)", "log(s*t)/(s*t-1) - log(s)/(s-1)",
                             "0", "-1/(8*s^2*t)"}) {
        const auto f = F(text);
        CHECK(F(f.str()) == f);
    }
    CHECK(F("(s-1)/(s-1)") == F("1"));
    CHECK(F("s/(s*t)") == F("1/t"));
    CHECK(F("log(t)") == F("log(s*t) - log(s)"));
    CHECK_THROWS_AS(F("log(s^2)"), UsageError);
    CHECK_THROWS_AS(F("(s+1"), UsageError);
}

TEST_CASE("arithmetic identities") {
    const auto a = F("log(s)/(s-1)"), b = F("(s+1)/(s^2*t)");
    CHECK((a + b) - b == a);
    CHECK(((a * b) - F("(s+1)*log(s)/((s-1)*s^2*t)")).is_zero());
}

TEST_CASE("evaluation and removable singularities") {
    const auto K = F("(-2*s + (s+1)*log(s) + 2) / (2*(s-1)^3)");
    CHECK(eval_function(K, 2.0) == doctest::Approx((3 * std::log(2.0) - 2) / 2).epsilon(1e-14));
    CHECK(std::abs(eval_function(K, 1.0) - 1.0 / 12) < 1e-8);
    CHECK(std::abs(eval_function(K, 1.0 + 1e-6) - 1.0 / 12) < 1e-6);
    const auto L = F("log(s)/(s-1)");
    CHECK(std::abs(eval_function(L, 1.0) - 1.0) < 1e-10);
    const auto H = F("(log(s*t)/(s*t-1) - log(s)/(s-1))/(s*(t-1))");
    CHECK(std::isfinite(eval_function(H, 1.0, 1.0)));
    CHECK(std::abs(eval_function(H, 1.0, 1.0) - eval_function(H, 1.0 + 1e-3, 1.0 - 1e-3)) < 1e-2);
    CHECK_THROWS_AS(eval_function(K, 0.0), UsageError);
    CHECK_THROWS_AS(eval_function(K, 2.0, -1.0), UsageError);
}

TEST_CASE("bivariate series") {
    const BiSeries e = BiSeries::exp_linear(6, 1, 0);
    CHECK(e.at(3, 0) == Rational(1, 6));
    CHECK(e.at(0, 1) == 0);
    const BiSeries inv = e.inverse();
    const BiSeries one = e * inv;
    CHECK(one.at(0, 0) == 1);
    for (int i = 1; i <= 6; ++i) CHECK(one.at(i, 0) == 0);
    // (e^{z₁} − 1)/z₁
    BiSeries num = e + BiSeries::constant(6, -1);
    CHECK(num.divide_z1().at(2, 0) == Rational(1, 6));
}

TEST_CASE("Taylor coefficients at the identity") {
    const auto K = F("(-2*s + (s+1)*log(s) + 2) / (2*(s-1)^3)");
    const BiSeries c = taylor_at_identity(K, 6);
    CHECK(c.at(0, 0) == Rational(1, 12));
    // first-order coefficient against a central difference in z
    const double h = 1e-3;
    const double d1 = (eval_function(K, std::exp(h)) - eval_function(K, std::exp(-h))) / (2 * h);
    CHECK(std::abs(to_double(c.at(1, 0)) - d1) < 1e-5);
}
