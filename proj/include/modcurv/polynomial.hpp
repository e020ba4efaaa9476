#pragma once

#include "modcurv/rational.hpp"

#include <array>
#include <map>
#include <string>
#include <utility>

namespace modcurv {

// Polynomial in (s, t) with rational coefficients; keys are (deg_s, deg_t).
class Poly2 {
public:
    using Key = std::pair<int, int>;

    Poly2() = default;
    Poly2(const Rational& c);  // NOLINT(implicit)
    static Poly2 monomial(const Rational& c, int ds, int dt);
    static Poly2 s() { return monomial(1, 1, 0); }
    static Poly2 t() { return monomial(1, 0, 1); }

    const std::map<Key, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_term() const;

    Poly2& operator+=(const Poly2& o);
    Poly2& operator-=(const Poly2& o);
    Poly2& operator*=(const Rational& q);
    Poly2 operator-() const;
    friend Poly2 operator+(Poly2 a, const Poly2& b) { return a += b; }
    friend Poly2 operator-(Poly2 a, const Poly2& b) { return a -= b; }
    friend Poly2 operator*(const Poly2& a, const Poly2& b);
    friend Poly2 operator*(Poly2 a, const Rational& q) { return a *= q; }
    friend bool operator==(const Poly2& a, const Poly2& b) { return a.terms_ == b.terms_; }

    Poly2 pow(int e) const;
    bool uses_t() const;

    template <class T>
    T eval(const T& s, const T& t) const {
        T acc(0);
        for (const auto& [k, c] : terms_) {
            T term = c.template convert_to<T>();
            for (int i = 0; i < k.first; ++i) term *= s;
            for (int i = 0; i < k.second; ++i) term *= t;
            acc += term;
        }
        return acc;
    }

    // "-2*s + 2", descending in (deg_s, deg_t)
    std::string str() const;

private:
    void add_term(const Key& k, const Rational& c);
    std::map<Key, Rational> terms_;
};

// The only irreducible denominators that arise: s, t, s−1, t−1, st−1.
enum class Factor : int { S = 0, T = 1, SM1 = 2, TM1 = 3, STM1 = 4 };
constexpr int kFactorCount = 5;

Poly2 factor_poly(Factor f);
std::string factor_name(Factor f);
// Exact division; returns false (leaving q untouched) when f does not divide p.
bool divide_by_factor(const Poly2& p, Factor f, Poly2& q);

// num / Π factor^den[f], kept reduced (no factor divides num).
class RatFunc {
public:
    RatFunc() = default;
    RatFunc(const Rational& c) : num_(c) {}  // NOLINT(implicit)
    RatFunc(Poly2 num) : num_(std::move(num)) { normalize(); }  // NOLINT(implicit)
    RatFunc(Poly2 num, std::array<int, kFactorCount> den);
    // factor^e for any integer e
    static RatFunc power(Factor f, int e);

    const Poly2& num() const { return num_; }
    const std::array<int, kFactorCount>& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    Poly2 den_poly() const;

    RatFunc& operator+=(const RatFunc& o);
    RatFunc& operator-=(const RatFunc& o);
    RatFunc& operator*=(const RatFunc& o);
    RatFunc operator-() const;
    friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
    friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
    friend RatFunc operator*(RatFunc a, const RatFunc& b) { return a *= b; }
    friend bool operator==(const RatFunc& a, const RatFunc& b) { return (a - b).is_zero(); }

    RatFunc pow(int e) const;  // e may be negative when invertible
    // Inverse; the numerator must factor over the basis (else std::domain_error).
    RatFunc inverse() const;

    template <class T>
    T eval(const T& s, const T& t) const {
        T d(1);
        for (int f = 0; f < kFactorCount; ++f)
            for (int e = 0; e < den_[f]; ++e) d *= factor_poly(static_cast<Factor>(f)).eval(s, t);
        return num_.eval(s, t) / d;
    }

private:
    void normalize();
    Poly2 num_;
    std::array<int, kFactorCount> den_{};
};

}  // namespace modcurv
