#include "modcurv/errors.hpp"
#include "modcurv/theta_algebra.hpp"

#include <doctest.h>

#include <random>

using namespace modcurv;
using C = std::complex<double>;

namespace {

FloatElement e1() { return FloatElement::monomial(2, {1, 0}, C(1.0)); }

FloatElement random_float(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> idx(-3, 3), size(1, 8);
    std::normal_distribution<double> g;
    FloatElement e(2);
    for (int i = size(rng); i > 0; --i) e.add(std::vector<int>{idx(rng), idx(rng)}, C(g(rng), g(rng)));
    return e;
}

ExactElement random_exact(std::mt19937_64& rng, const SkewMatrix& th) {
    std::uniform_int_distribution<int> idx(-3, 3), c(-4, 4), size(1, 8);
    ExactElement e(2);
    for (int i = size(rng); i > 0; --i)
        e.add(std::vector<int>{idx(rng), idx(rng)},
              ScalarOps<Cyclo>::from_gauss(GaussRational(Rational(c(rng)), Rational(c(rng), 3)), th));
    return e;
}

double max_diff(const FloatElement& a, const FloatElement& b) {
    const FloatElement d = a - b;
    double m = 0;
    for (const auto& [r, c] : d.coeffs()) m = std::max(m, std::abs(c));
    return m;
}

}  // namespace

TEST_CASE("chi values") {
    CHECK(chi(SkewMatrix::zero(2), {3, -1}, {2, 5}) == C(1.0));
    const double th = 0.37;
    const C x = chi(SkewMatrix::standard(th), {1, 0}, {0, 1});
    CHECK(std::abs(x - std::exp(C(0, std::numbers::pi * th))) < 1e-15);
    CHECK_THROWS_AS(chi(SkewMatrix::zero(2), {1, 0, 0}, {0, 1}), UsageError);
}

TEST_CASE("exact pairing and cyclotomic order") {
    const auto th = SkewMatrix::standard(Rational(1, 3));
    CHECK(th.is_exact());
    CHECK(th.exact_pairing(make_index({1, 0}), make_index({0, 1})) == Rational(1, 3));
    CHECK(th.root_order() % 4 == 0);
    const Cyclo z = ScalarOps<Cyclo>::chi(th, make_index({1, 0}), make_index({0, 1}));
    CHECK(std::abs(z.to_complex() - std::exp(C(0, std::numbers::pi / 3))) < 1e-14);
}

TEST_CASE("zero deformation is convolution") {
    std::mt19937_64 rng(5);
    const auto th = SkewMatrix::zero(2);
    for (int i = 0; i < 20; ++i) {
        auto a = random_float(rng), b = random_float(rng);
        FloatElement conv(2);
        for (const auto& [r, x] : a.coeffs())
            for (const auto& [s, y] : b.coeffs()) {
                MultiIndex k{};
                for (int j = 0; j < kMaxRank; ++j) k[j] = r[j] + s[j];
                conv.add(k, x * y);
            }
        CHECK(max_diff(deformed_product(a, b, th), conv) < 1e-14);
        CHECK(max_diff(deformed_product(a, b, th), deformed_product(b, a, th)) < 1e-14);
    }
}

TEST_CASE("rank mismatch is a usage error") {
    FloatElement a = FloatElement::monomial(2, {1, 0}, C(1.0));
    FloatElement b = FloatElement::monomial(3, {1, 0, 0}, C(1.0));
    CHECK_THROWS_AS(deformed_product(a, b, SkewMatrix::zero(2)), UsageError);
    CHECK_THROWS_AS(deformed_product(a, a, SkewMatrix::zero(3)), UsageError);
    CHECK_THROWS_AS(FloatElement(0), UsageError);
}

TEST_CASE("star") {
    const auto s = star(e1());
    REQUIRE(s.support_size() == 1);
    CHECK(s.coeffs().begin()->first == make_index({-1, 0}));
    CHECK(s.coeffs().begin()->second == C(1.0));
    std::mt19937_64 rng(9);
    const auto th = SkewMatrix::standard(0.41);
    for (int i = 0; i < 20; ++i) {
        auto a = random_float(rng), b = random_float(rng);
        CHECK(max_diff(star(star(a)), a) == 0.0);
        CHECK(max_diff(star(deformed_product(a, b, th)), deformed_product(star(b), star(a), th)) < 1e-12);
    }
}

TEST_CASE("trace") {
    CHECK(trace(e1(), C(0.0)) == C(0.0));
    std::mt19937_64 rng(10);
    const auto th = SkewMatrix::standard(0.73);
    for (int i = 0; i < 20; ++i) {
        auto a = random_float(rng), b = random_float(rng);
        const C ab = trace(deformed_product(a, b, th), C(0.0));
        CHECK(std::abs(ab - trace(deformed_product(b, a, th), C(0.0))) < 1e-12);
        CHECK(std::abs(ab - trace(deformed_product(a, b, SkewMatrix::zero(2)), C(0.0))) < 1e-12);
    }
}

TEST_CASE("derivation") {
    const auto th = SkewMatrix::standard(0.2);
    const auto d = derivation(e1(), 1, th);
    CHECK(std::abs(d.coeffs().begin()->second - C(0, 2 * std::numbers::pi)) < 1e-15);
    CHECK(derivation(one_element<C>(2, th), 2, th).is_zero());
    CHECK_THROWS_AS(derivation(e1(), 0, th), UsageError);
    CHECK_THROWS_AS(derivation(e1(), 3, th), UsageError);
}

TEST_CASE("exact laws hold identically") {
    const auto th = SkewMatrix::standard(Rational(2, 5));
    std::mt19937_64 rng(21);
    const Cyclo zero(th.root_order());
    for (int i = 0; i < 25; ++i) {
        auto a = random_exact(rng, th), b = random_exact(rng, th), c = random_exact(rng, th);
        CHECK((deformed_product(deformed_product(a, b, th), c, th) -
               deformed_product(a, deformed_product(b, c, th), th))
                  .is_zero());
        CHECK((star(deformed_product(a, b, th)) - deformed_product(star(b), star(a), th)).is_zero());
        CHECK(trace(deformed_product(a, b, th), zero) == trace(deformed_product(b, a, th), zero));
        for (int j = 1; j <= 2; ++j)
            CHECK((derivation(deformed_product(a, b, th), j, th) -
                   deformed_product(derivation(a, j, th), b, th) - deformed_product(a, derivation(b, j, th), th))
                      .is_zero());
    }
}

TEST_CASE("exp_element") {
    const auto th = SkewMatrix::standard(0.3);
    const auto one = one_element<C>(2, th);
    CHECK(max_diff(exp_element(FloatElement(2), th, 5), one) == 0.0);
    const double c = 0.7;
    const auto e = exp_element(one.scaled(C(c)), th, 30);
    CHECK(std::abs(trace(e, C(0.0)) - std::exp(c)) < 1e-14);
    CHECK(e.support_size() == 1);
    CHECK_THROWS_AS(exp_element(e1(), th, 4), PreconditionError);
    CHECK_THROWS_AS(exp_element(one, th, 0), UsageError);
}

TEST_CASE("text round trip") {
    FloatElement a(2);
    a.add(std::vector<int>{1, -2}, C(0.5, -1.25));
    a.add(std::vector<int>{0, 0}, C(2.0, 0.0));
    const auto b = parse_float_element(to_text(a));
    CHECK(max_diff(a, b) == 0.0);
    const auto th = SkewMatrix::standard(Rational(1, 3));
    const auto x = parse_exact_element("1,0 : 1/2,-3\n0,-1 : 0,1", th);
    CHECK(x.support_size() == 2);
    CHECK(parse_exact_element(to_text(x), th).coeffs() == x.coeffs());
    CHECK_THROWS_AS(parse_float_element("1,0 ; 1,1"), UsageError);
}
