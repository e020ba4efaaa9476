#include "modcurv/series.hpp"

#include <algorithm>
#include <stdexcept>

namespace modcurv {

BiSeries::BiSeries(int order) : order_(order) {
    if (order < 0) throw std::invalid_argument("series order must be nonnegative");
    c_.assign(index(0, order + 1), Rational(0));
}

BiSeries BiSeries::constant(int order, const Rational& c) {
    BiSeries s(order);
    s.at(0, 0) = c;
    return s;
}

BiSeries BiSeries::exp_linear(int order, const Rational& a, const Rational& b) {
    BiSeries s(order);
    for (int i = 0; i <= order; ++i)
        for (int j = 0; i + j <= order; ++j)
            s.at(i, j) = rational_pow(a, i) * rational_pow(b, j) / (factorial(i) * factorial(j));
    return s;
}

const Rational& BiSeries::at(int i, int j) const { return c_.at(index(i, j)); }
Rational& BiSeries::at(int i, int j) { return c_.at(index(i, j)); }

BiSeries& BiSeries::operator+=(const BiSeries& o) {
    if (o.order_ != order_) throw std::invalid_argument("series order mismatch");
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
}

BiSeries operator*(const BiSeries& a, const BiSeries& b) {
    if (a.order_ != b.order_) throw std::invalid_argument("series order mismatch");
    const int n = a.order_;
    BiSeries r(n);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j) {
            const Rational& x = a.at(i, j);
            if (x == 0) continue;
            for (int k = 0; i + j + k <= n; ++k)
                for (int l = 0; i + j + k + l <= n; ++l) {
                    const Rational& y = b.at(k, l);
                    if (y != 0) r.at(i + k, j + l) += x * y;
                }
        }
    return r;
}

BiSeries BiSeries::scaled(const Rational& q) const {
    BiSeries r(*this);
    for (auto& c : r.c_) c *= q;
    return r;
}

BiSeries BiSeries::inverse() const {
    if (at(0, 0) == 0) throw std::domain_error("series inverse needs a nonzero constant term");
    // 1/(c(1 − x)) = c^{-1} Σ x^k with x = 1 − f/c, which has no constant term
    Rational inv = 1 / at(0, 0);
    BiSeries x = scaled(-inv);
    x.at(0, 0) = 0;
    BiSeries acc = constant(order_, 1);
    BiSeries power = constant(order_, 1);
    for (int k = 1; k <= order_; ++k) {
        power = power * x;
        acc += power;
    }
    return acc.scaled(inv);
}

BiSeries BiSeries::divide_z1() const {
    BiSeries r(order_);
    for (int i = 0; i <= order_; ++i)
        for (int j = 0; i + j <= order_; ++j) {
            if (i == 0) {
                if (at(0, j) != 0) throw std::domain_error("series not divisible by z1");
                continue;
            }
            r.at(i - 1, j) = at(i, j);
        }
    return r;
}

BiSeries BiSeries::divide_z2() const {
    BiSeries r(order_);
    for (int i = 0; i <= order_; ++i)
        for (int j = 0; i + j <= order_; ++j) {
            if (j == 0) {
                if (at(i, 0) != 0) throw std::domain_error("series not divisible by z2");
                continue;
            }
            r.at(i, j - 1) = at(i, j);
        }
    return r;
}

BiSeries BiSeries::divide_z1_plus_z2() const {
    // per homogeneous component: a_i = q_{i−1} + q_i, i = power of z₁
    BiSeries r(order_);
    if (at(0, 0) != 0) throw std::domain_error("series not divisible by z1+z2");
    for (int d = 1; d <= order_; ++d) {
        Rational prev = 0;
        for (int i = 0; i < d; ++i) {
            Rational q = at(i, d - i) - prev;
            r.at(i, d - 1 - i) = q;
            prev = q;
        }
        if (at(d, 0) != prev) throw std::domain_error("series not divisible by z1+z2");
    }
    return r;
}

namespace {

// (e^x − 1)/x for x = a z₁ + b z₂
BiSeries expm1_over_x(int order, int a, int b) {
    BiSeries lin(order);
    if (order >= 1) {
        lin.at(1, 0) = a;
        lin.at(0, 1) = b;
    }
    BiSeries acc = BiSeries::constant(order, 1);
    BiSeries power = BiSeries::constant(order, 1);
    for (int n = 1; n <= order; ++n) {
        power = power * lin;
        acc += power.scaled(1 / factorial(n + 1));
    }
    return acc;
}

BiSeries poly_at_exp(const Poly2& p, int order) {
    BiSeries acc(order);
    for (const auto& [k, c] : p.terms()) acc += BiSeries::exp_linear(order, k.first, k.second).scaled(c);
    return acc;
}

}  // namespace

BiSeries taylor_at_identity(const SymbolicFunction& f, int order) {
    // Every denominator factor is (monomial in z) · unit:
    //   s, t → units; s−1 → z₁·u(z₁); t−1 → z₂·u(z₂); st−1 → (z₁+z₂)·u(z₁+z₂).
    std::array<int, 3> zmax{};  // powers of z₁, z₂, z₁+z₂
    const std::array<LogBasis, 3> bases{LogBasis::ONE, LogBasis::LOG_S, LogBasis::LOG_ST};
    for (auto b : bases) {
        const auto& d = f.part(b).den();
        zmax[0] = std::max(zmax[0], d[static_cast<int>(Factor::SM1)]);
        zmax[1] = std::max(zmax[1], d[static_cast<int>(Factor::TM1)]);
        zmax[2] = std::max(zmax[2], d[static_cast<int>(Factor::STM1)]);
    }
    const int work = order + zmax[0] + zmax[1] + zmax[2];
    BiSeries z1(work), z2(work), z12(work);
    if (work >= 1) {
        z1.at(1, 0) = 1;
        z2.at(0, 1) = 1;
        z12.at(1, 0) = 1;
        z12.at(0, 1) = 1;
    }
    const BiSeries u1 = expm1_over_x(work, 1, 0).inverse();
    const BiSeries u2 = expm1_over_x(work, 0, 1).inverse();
    const BiSeries u12 = expm1_over_x(work, 1, 1).inverse();

    BiSeries numer(work);
    for (auto b : bases) {
        const RatFunc& part = f.part(b);
        if (part.is_zero()) continue;
        const auto& d = part.den();
        BiSeries s = poly_at_exp(part.num(), work);
        s = s * BiSeries::exp_linear(work, -d[static_cast<int>(Factor::S)], -d[static_cast<int>(Factor::T)]);
        for (int k = 0; k < d[static_cast<int>(Factor::SM1)]; ++k) s = s * u1;
        for (int k = 0; k < d[static_cast<int>(Factor::TM1)]; ++k) s = s * u2;
        for (int k = 0; k < d[static_cast<int>(Factor::STM1)]; ++k) s = s * u12;
        for (int k = d[static_cast<int>(Factor::SM1)]; k < zmax[0]; ++k) s = s * z1;
        for (int k = d[static_cast<int>(Factor::TM1)]; k < zmax[1]; ++k) s = s * z2;
        for (int k = d[static_cast<int>(Factor::STM1)]; k < zmax[2]; ++k) s = s * z12;
        if (b == LogBasis::LOG_S) s = s * z1;
        if (b == LogBasis::LOG_ST) s = s * z12;
        numer += s;
    }
    // the top `drop` degrees are incomplete after division; keep only ≤ order
    for (int k = 0; k < zmax[0]; ++k) numer = numer.divide_z1();
    for (int k = 0; k < zmax[1]; ++k) numer = numer.divide_z2();
    for (int k = 0; k < zmax[2]; ++k) numer = numer.divide_z1_plus_z2();
    BiSeries out(order);
    for (int i = 0; i <= order; ++i)
        for (int j = 0; i + j <= order; ++j) out.at(i, j) = numer.at(i, j);
    return out;
}

}  // namespace modcurv
