#include "modcurv/cyclotomic.hpp"

#include "modcurv/errors.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace modcurv {

namespace {

using Poly = std::vector<Rational>;  // low → high

// exact division by a monic polynomial
Poly poly_div_exact(Poly num, const Poly& den) {
    std::size_t dn = den.size() - 1;
    Poly q(num.size() - dn, Rational(0));
    for (std::size_t k = num.size(); k-- > dn;) {
        Rational lead = num[k];
        q[k - dn] = lead;
        for (std::size_t j = 0; j <= dn; ++j) num[k - dn + j] -= lead * den[j];
    }
    for (const auto& x : num)
        if (x != 0) throw std::logic_error("cyclotomic polynomial division not exact");
    return q;
}

Poly cyclotomic_poly(int n, std::map<int, Poly>& memo) {
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    Poly p(n + 1, Rational(0));
    p[0] = -1;
    p[n] = 1;
    for (int d = 1; d < n; ++d)
        if (n % d == 0) p = poly_div_exact(p, cyclotomic_poly(d, memo));
    memo[n] = p;
    return p;
}

std::shared_ptr<const CyclotomicData> build(int order) {
    std::map<int, Poly> memo;
    auto data = std::make_shared<CyclotomicData>();
    data->order = order;
    data->phi = cyclotomic_poly(order, memo);
    data->degree = static_cast<int>(data->phi.size()) - 1;
    int deg = data->degree;
    Poly cur(deg, Rational(0));
    cur[0] = 1;
    for (int e = 0; e < order; ++e) {
        data->powers.push_back(cur);
        // multiply by ζ and reduce
        Poly next(deg, Rational(0));
        for (int j = 0; j + 1 < deg; ++j) next[j + 1] = cur[j];
        Rational top = cur[deg - 1];
        if (top != 0)
            for (int j = 0; j < deg; ++j) next[j] -= top * data->phi[j];
        cur = std::move(next);
    }
    return data;
}

}  // namespace

std::shared_ptr<const CyclotomicData> cyclotomic_data(int order) {
    if (order < 1) throw UsageError("cyclotomic order must be positive");
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const CyclotomicData>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;
    auto d = build(order);
    cache[order] = d;
    return d;
}

Cyclo::Cyclo(int order) : data_(cyclotomic_data(order)), c_(data_->degree, Rational(0)) {}

Cyclo::Cyclo(int order, const GaussRational& z) : Cyclo(order) {
    if (order % 4 != 0 && z.im != 0)
        throw UsageError("Gaussian embedding needs a cyclotomic order divisible by 4");
    c_[0] += z.re;
    if (z.im != 0) {
        const auto& ipow = data_->powers[order / 4];
        for (int j = 0; j < data_->degree; ++j) c_[j] += z.im * ipow[j];
    }
}

Cyclo Cyclo::root_power(int order, long long exponent) {
    Cyclo r(order);
    long long e = ((exponent % order) + order) % order;
    r.c_ = r.data_->powers[static_cast<std::size_t>(e)];
    return r;
}

bool Cyclo::is_zero() const {
    for (const auto& x : c_)
        if (x != 0) return false;
    return true;
}

void Cyclo::check_same(const Cyclo& o) const {
    if (order() != o.order()) throw UsageError("cyclotomic order mismatch");
}

Cyclo Cyclo::conj() const {
    Cyclo r(order());
    int n = order();
    for (int j = 0; j < data_->degree; ++j) {
        if (c_[j] == 0) continue;
        const auto& img = data_->powers[(n - j) % n];
        for (int k = 0; k < data_->degree; ++k) r.c_[k] += c_[j] * img[k];
    }
    return r;
}

std::complex<double> Cyclo::to_complex() const {
    std::complex<double> acc = 0;
    int n = order();
    for (int j = 0; j < data_->degree; ++j) {
        if (c_[j] == 0) continue;
        double ang = 2.0 * std::numbers::pi * j / n;
        acc += to_double(c_[j]) * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return acc;
}

bool Cyclo::as_gauss(GaussRational& z) const {
    // Q(i) sits inside as span{1, ζ^{N/4}}; test membership by reconstruction
    if (order() % 4 != 0) {
        for (int j = 1; j < data_->degree; ++j)
            if (c_[j] != 0) return false;
        z = GaussRational(c_[0]);
        return true;
    }
    const auto& ipow = data_->powers[order() / 4];
    // ζ^{N/4} reduced; find a pivot where ipow is nonzero
    int pivot = -1;
    for (int j = 0; j < data_->degree; ++j)
        if (ipow[j] != 0 && j != 0) {
            pivot = j;
            break;
        }
    Rational im = pivot < 0 ? Rational(0) : c_[pivot] / ipow[pivot];
    Rational re = c_[0] - im * ipow[0];
    Cyclo back(order(), GaussRational(re, im));
    if (!(back == *this)) return false;
    z = GaussRational(re, im);
    return true;
}

Cyclo& Cyclo::operator+=(const Cyclo& o) {
    check_same(o);
    for (std::size_t j = 0; j < c_.size(); ++j) c_[j] += o.c_[j];
    return *this;
}

Cyclo& Cyclo::operator-=(const Cyclo& o) {
    check_same(o);
    for (std::size_t j = 0; j < c_.size(); ++j) c_[j] -= o.c_[j];
    return *this;
}

Cyclo& Cyclo::operator*=(const Cyclo& o) {
    check_same(o);
    int deg = data_->degree;
    std::vector<Rational> prod(2 * deg, Rational(0));
    for (int i = 0; i < deg; ++i) {
        if (c_[i] == 0) continue;
        for (int j = 0; j < deg; ++j)
            if (o.c_[j] != 0) prod[i + j] += c_[i] * o.c_[j];
    }
    std::vector<Rational> r(deg, Rational(0));
    for (int e = 0; e < 2 * deg; ++e) {
        if (prod[e] == 0) continue;
        const auto& img = data_->powers[e % order()];
        for (int k = 0; k < deg; ++k) r[k] += prod[e] * img[k];
    }
    c_ = std::move(r);
    return *this;
}

Cyclo& Cyclo::operator*=(const Rational& q) {
    for (auto& x : c_) x *= q;
    return *this;
}

Cyclo Cyclo::operator-() const {
    Cyclo r(*this);
    for (auto& x : r.c_) x = -x;
    return r;
}

bool operator==(const Cyclo& a, const Cyclo& b) {
    if (a.order() != b.order()) return false;
    return a.c_ == b.c_;
}

}  // namespace modcurv
