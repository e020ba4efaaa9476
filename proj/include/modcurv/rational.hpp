#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <string>

namespace modcurv {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

std::string to_string(const Rational& q);
// Accepts "p", "-p", "p/q".
Rational parse_rational(const std::string& text);
double to_double(const Rational& q);

// a + b·i with a, b rational.
struct GaussRational {
    Rational re{0};
    Rational im{0};

    GaussRational() = default;
    GaussRational(Rational r) : re(std::move(r)) {}  // NOLINT(implicit)
    GaussRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    GaussRational(int r) : re(r) {}  // NOLINT(implicit)

    static GaussRational i() { return {Rational(0), Rational(1)}; }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }
    GaussRational conj() const { return {re, -im}; }

    GaussRational operator-() const { return {-re, -im}; }
    GaussRational& operator+=(const GaussRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussRational& operator-=(const GaussRational& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    GaussRational& operator*=(const GaussRational& o) {
        Rational r = re * o.re - im * o.im;
        Rational i = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }
    friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
    friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
    friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
    friend bool operator==(const GaussRational& a, const GaussRational& b) {
        return a.re == b.re && a.im == b.im;
    }

    std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }
};

// Real: "3/2". Imaginary: "3/2i". Mixed: "(1/2+3/2i)".
std::string to_string(const GaussRational& z);
GaussRational parse_gauss_rational(const std::string& text);

Rational rational_pow(const Rational& base, int exponent);
Rational factorial(int n);
Rational binomial(int n, int k);  // n may be negative

}  // namespace modcurv
