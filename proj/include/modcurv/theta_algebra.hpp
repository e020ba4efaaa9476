#pragma once

#include "modcurv/cyclotomic.hpp"
#include "modcurv/errors.hpp"
#include "modcurv/rational.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <string>
#include <vector>

namespace modcurv {

constexpr int kMaxRank = 6;
// Unused trailing entries stay zero, so lexicographic order is well defined.
using MultiIndex = std::array<int, kMaxRank>;

MultiIndex make_index(const std::vector<int>& r);

class SkewMatrix {
public:
    explicit SkewMatrix(std::vector<std::vector<Rational>> entries);
    static SkewMatrix from_doubles(std::vector<std::vector<double>> entries);
    static SkewMatrix zero(int n);
    static SkewMatrix standard(const Rational& theta);  // [[0,θ],[−θ,0]]
    static SkewMatrix standard(double theta);

    int rank() const { return n_; }
    bool is_exact() const { return exact_; }
    double value(int a, int b) const { return values_[a][b]; }
    const Rational& exact_value(int a, int b) const;

    double pairing(const MultiIndex& r, const MultiIndex& l) const;
    Rational exact_pairing(const MultiIndex& r, const MultiIndex& l) const;
    // N such that every χ value is a power of ζ_N; divisible by 4.
    int root_order() const;

private:
    SkewMatrix() = default;
    int n_ = 0;
    bool exact_ = false;
    std::vector<std::vector<Rational>> entries_;
    std::vector<std::vector<double>> values_;
    int root_order_ = 4;
};

// e^{πi⟨r,Θl⟩}
std::complex<double> chi(const SkewMatrix& theta, const std::vector<int>& r,
                         const std::vector<int>& l);

template <class S>
struct ScalarOps;

template <>
struct ScalarOps<std::complex<double>> {
    using S = std::complex<double>;
    static S zero(const SkewMatrix&) { return 0.0; }
    static S from_gauss(const GaussRational& z, const SkewMatrix&) { return z.to_complex(); }
    static S chi(const SkewMatrix& th, const MultiIndex& r, const MultiIndex& l) {
        double x = std::numbers::pi * th.pairing(r, l);
        return {std::cos(x), std::sin(x)};
    }
    static bool is_zero(const S& x) { return x == S(0.0); }
    static S conj(const S& x) { return std::conj(x); }
    static S scale(const S& x, const Rational& q) { return x * to_double(q); }
    // δ_j multiplies mode r by 2πi r_j
    static S derivation_factor(int rj, const SkewMatrix&) {
        return {0.0, 2.0 * std::numbers::pi * rj};
    }
    static double magnitude(const S& x) { return std::abs(x); }
    static std::complex<double> to_complex(const S& x) { return x; }
};

template <>
struct ScalarOps<Cyclo> {
    using S = Cyclo;
    static S zero(const SkewMatrix& th) { return Cyclo(th.root_order()); }
    static S from_gauss(const GaussRational& z, const SkewMatrix& th) {
        return Cyclo(th.root_order(), z);
    }
    static S chi(const SkewMatrix& th, const MultiIndex& r, const MultiIndex& l) {
        Rational e = th.exact_pairing(r, l) * th.root_order() / 2;
        if (boost::multiprecision::denominator(e) != 1)
            throw std::logic_error("pairing not resolved by cyclotomic order");
        return Cyclo::root_power(th.root_order(),
                                 boost::multiprecision::numerator(e).convert_to<long long>());
    }
    static bool is_zero(const S& x) { return x.is_zero(); }
    static S conj(const S& x) { return x.conj(); }
    static S scale(const S& x, const Rational& q) {
        S r(x);
        r *= q;
        return r;
    }
    // exact mode carries the normalized derivation δ_j/2π (2π is not in the field)
    static S derivation_factor(int rj, const SkewMatrix& th) {
        return Cyclo(th.root_order(), GaussRational(Rational(0), Rational(rj)));
    }
    static double magnitude(const S& x) { return std::abs(x.to_complex()); }
    static std::complex<double> to_complex(const S& x) { return x.to_complex(); }
};

template <class S>
class FourierElement {
public:
    using Scalar = S;
    using Ops = ScalarOps<S>;

    FourierElement() = default;
    explicit FourierElement(int n) : n_(n) {
        if (n < 1 || n > kMaxRank) throw UsageError("torus rank out of range");
    }

    static FourierElement monomial(int n, const std::vector<int>& r, const S& c) {
        FourierElement e(n);
        e.add(r, c);
        return e;
    }

    int rank() const { return n_; }
    const std::map<MultiIndex, S>& coeffs() const { return c_; }
    std::size_t support_size() const { return c_.size(); }
    bool is_zero() const { return c_.empty(); }

    void add(const MultiIndex& r, const S& c) {
        if (Ops::is_zero(c)) return;
        auto it = c_.find(r);
        if (it == c_.end()) {
            c_.emplace(r, c);
            return;
        }
        it->second += c;
        if (Ops::is_zero(it->second)) c_.erase(it);
    }
    void add(const std::vector<int>& r, const S& c) {
        if (static_cast<int>(r.size()) != n_) throw UsageError("multi-index length mismatch");
        add(make_index(r), c);
    }

    // coefficient at r, or `zero` when absent
    S coeff(const MultiIndex& r, const S& zero) const {
        auto it = c_.find(r);
        return it == c_.end() ? zero : it->second;
    }

    FourierElement& operator+=(const FourierElement& o) {
        check_rank(o);
        for (const auto& [r, c] : o.c_) add(r, c);
        return *this;
    }
    FourierElement& operator-=(const FourierElement& o) {
        check_rank(o);
        for (const auto& [r, c] : o.c_) add(r, -c);
        return *this;
    }
    friend FourierElement operator+(FourierElement a, const FourierElement& b) { return a += b; }
    friend FourierElement operator-(FourierElement a, const FourierElement& b) { return a -= b; }

    FourierElement scaled(const S& x) const {
        FourierElement r(n_);
        for (const auto& [k, c] : c_) r.add(k, c * x);
        return r;
    }
    FourierElement scaled(const Rational& q) const {
        FourierElement r(n_);
        for (const auto& [k, c] : c_) r.add(k, Ops::scale(c, q));
        return r;
    }

    double l1_norm() const {
        double s = 0;
        for (const auto& [k, c] : c_) s += Ops::magnitude(c);
        return s;
    }

    // drop coefficients below `tol` (floating mode hygiene)
    void prune(double tol) {
        for (auto it = c_.begin(); it != c_.end();)
            it = Ops::magnitude(it->second) <= tol ? c_.erase(it) : std::next(it);
    }

    void check_rank(const FourierElement& o) const {
        if (o.n_ != n_) throw UsageError("torus rank mismatch");
    }

private:
    int n_ = 0;
    std::map<MultiIndex, S> c_;
};

using FloatElement = FourierElement<std::complex<double>>;
using ExactElement = FourierElement<Cyclo>;

template <class S>
FourierElement<S> one_element(int n, const SkewMatrix& theta) {
    return FourierElement<S>::monomial(n, std::vector<int>(n, 0),
                                       ScalarOps<S>::from_gauss(GaussRational(1), theta));
}

template <class S>
FourierElement<S> deformed_product(const FourierElement<S>& a, const FourierElement<S>& b,
                                   const SkewMatrix& theta) {
    a.check_rank(b);
    if (theta.rank() != a.rank()) throw UsageError("skew matrix rank mismatch");
    FourierElement<S> out(a.rank());
    for (const auto& [r, ar] : a.coeffs())
        for (const auto& [s, bs] : b.coeffs()) {
            MultiIndex k{};
            for (int j = 0; j < kMaxRank; ++j) k[j] = r[j] + s[j];
            S term = ScalarOps<S>::chi(theta, r, s);
            term *= ar;
            term *= bs;
            out.add(k, term);
        }
    return out;
}

template <class S>
FourierElement<S> star(const FourierElement<S>& a) {
    FourierElement<S> out(a.rank());
    for (const auto& [r, c] : a.coeffs()) {
        MultiIndex m{};
        for (int j = 0; j < kMaxRank; ++j) m[j] = -r[j];
        out.add(m, ScalarOps<S>::conj(c));
    }
    return out;
}

template <class S>
S trace(const FourierElement<S>& a, const S& zero) {
    return a.coeff(MultiIndex{}, zero);
}

// axis is 1-based
template <class S>
FourierElement<S> derivation(const FourierElement<S>& a, int axis, const SkewMatrix& theta) {
    if (axis < 1 || axis > a.rank()) throw UsageError("derivation axis out of range");
    FourierElement<S> out(a.rank());
    for (const auto& [r, c] : a.coeffs()) {
        if (r[axis - 1] == 0) continue;
        S f = ScalarOps<S>::derivation_factor(r[axis - 1], theta);
        f *= c;
        out.add(r, f);
    }
    return out;
}

template <class S>
bool is_self_adjoint(const FourierElement<S>& h, double tol) {
    FourierElement<S> d = star(h) - h;
    return d.l1_norm() <= tol;
}

template <class S>
FourierElement<S> exp_element(const FourierElement<S>& h, const SkewMatrix& theta, int order) {
    if (order < 1) throw UsageError("series order must be at least 1");
    if (!is_self_adjoint(h, 1e-12 * std::max(1.0, h.l1_norm())))
        throw PreconditionError("exp_element: argument is not self-adjoint");
    FourierElement<S> result = one_element<S>(h.rank(), theta);
    FourierElement<S> power = result;
    for (int n = 1; n <= order; ++n) {
        power = deformed_product(power, h, theta).scaled(Rational(1, n));
        result += power;
    }
    return result;
}

// Text form: one line per mode, "r1,...,rn : re,im".
std::string to_text(const FloatElement& a);
std::string to_text(const ExactElement& a);
FloatElement parse_float_element(const std::string& text);
ExactElement parse_exact_element(const std::string& text, const SkewMatrix& theta);

}  // namespace modcurv
