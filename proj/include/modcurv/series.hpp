#pragma once

#include "modcurv/symbolic_function.hpp"

#include <vector>

namespace modcurv {

// Truncated power series in (z₁, z₂) with rational coefficients, total degree ≤ order.
class BiSeries {
public:
    explicit BiSeries(int order);
    static BiSeries constant(int order, const Rational& c);
    // e^{a z₁ + b z₂}
    static BiSeries exp_linear(int order, const Rational& a, const Rational& b);

    int order() const { return order_; }
    const Rational& at(int i, int j) const;
    Rational& at(int i, int j);

    BiSeries& operator+=(const BiSeries& o);
    friend BiSeries operator+(BiSeries a, const BiSeries& b) { return a += b; }
    friend BiSeries operator*(const BiSeries& a, const BiSeries& b);
    BiSeries scaled(const Rational& q) const;
    BiSeries inverse() const;  // constant term must be nonzero

    // exact division; std::domain_error on a nonzero remainder
    BiSeries divide_z1() const;
    BiSeries divide_z2() const;
    BiSeries divide_z1_plus_z2() const;

private:
    static std::size_t index(int i, int j) { return static_cast<std::size_t>((i + j) * (i + j + 1) / 2 + j); }
    int order_;
    std::vector<Rational> c_;
};

// Taylor coefficients of f(e^{z₁}, e^{z₂}) at z = 0 up to total degree `order`.
// f must be analytic at s = t = 1 (removable singularities only).
BiSeries taylor_at_identity(const SymbolicFunction& f, int order);

}  // namespace modcurv
