#include "modcurv/polynomial.hpp"

#include <stdexcept>

namespace modcurv {

Poly2::Poly2(const Rational& c) {
    if (c != 0) terms_[{0, 0}] = c;
}

Poly2 Poly2::monomial(const Rational& c, int ds, int dt) {
    Poly2 p;
    if (c != 0) p.terms_[{ds, dt}] = c;
    return p;
}

bool Poly2::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Key{0, 0});
}

Rational Poly2::constant_term() const {
    auto it = terms_.find({0, 0});
    return it == terms_.end() ? Rational(0) : it->second;
}

void Poly2::add_term(const Key& k, const Rational& c) {
    if (c == 0) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
        terms_.emplace(k, c);
        return;
    }
    it->second += c;
    if (it->second == 0) terms_.erase(it);
}

Poly2& Poly2::operator+=(const Poly2& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
}

Poly2& Poly2::operator-=(const Poly2& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
}

Poly2& Poly2::operator*=(const Rational& q) {
    if (q == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [k, c] : terms_) c *= q;
    return *this;
}

Poly2 Poly2::operator-() const {
    Poly2 r(*this);
    for (auto& [k, c] : r.terms_) c = -c;
    return r;
}

Poly2 operator*(const Poly2& a, const Poly2& b) {
    Poly2 r;
    for (const auto& [ka, ca] : a.terms_)
        for (const auto& [kb, cb] : b.terms_)
            r.add_term({ka.first + kb.first, ka.second + kb.second}, ca * cb);
    return r;
}

Poly2 Poly2::pow(int e) const {
    if (e < 0) throw std::domain_error("negative polynomial power");
    Poly2 r(Rational(1)), b(*this);
    while (e > 0) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

bool Poly2::uses_t() const {
    for (const auto& [k, c] : terms_)
        if (k.second != 0) return true;
    return false;
}

std::string Poly2::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [k, c] = *it;
        Rational mag = c < 0 ? Rational(-c) : c;
        std::string mono;
        auto var = [&](const char* name, int d) {
            if (d == 0) return;
            if (!mono.empty()) mono += "*";
            mono += name;
            if (d > 1) mono += "^" + std::to_string(d);
        };
        var("s", k.first);
        var("t", k.second);
        std::string coeff = to_string(mag);
        std::string body;
        if (mono.empty())
            body = coeff;
        else if (mag == 1)
            body = mono;
        else
            body = coeff + "*" + mono;
        if (first)
            out = (c < 0 ? "-" : "") + body;
        else
            out += (c < 0 ? " - " : " + ") + body;
        first = false;
    }
    return out;
}

Poly2 factor_poly(Factor f) {
    switch (f) {
        case Factor::S: return Poly2::s();
        case Factor::T: return Poly2::t();
        case Factor::SM1: return Poly2::s() - Poly2(1);
        case Factor::TM1: return Poly2::t() - Poly2(1);
        case Factor::STM1: return Poly2::monomial(1, 1, 1) - Poly2(1);
    }
    throw std::logic_error("bad factor");
}

std::string factor_name(Factor f) {
    switch (f) {
        case Factor::S: return "s";
        case Factor::T: return "t";
        case Factor::SM1: return "(s-1)";
        case Factor::TM1: return "(t-1)";
        case Factor::STM1: return "(s*t-1)";
    }
    throw std::logic_error("bad factor");
}

namespace {

// divide by (x − 1) in one variable; var 0 = s, 1 = t
bool divide_linear(const Poly2& p, int var, Poly2& q) {
    // group by the other variable's degree
    std::map<int, std::map<int, Rational>> rows;
    for (const auto& [k, c] : p.terms()) {
        int d = var == 0 ? k.first : k.second;
        int o = var == 0 ? k.second : k.first;
        rows[o][d] = c;
    }
    Poly2 out;
    for (auto& [o, row] : rows) {
        int top = row.rbegin()->first;
        // synthetic division by (x − 1): carry accumulates from the top
        Rational carry(0);
        for (int d = top; d >= 1; --d) {
            auto it = row.find(d);
            carry += it == row.end() ? Rational(0) : it->second;
            out += var == 0 ? Poly2::monomial(carry, d - 1, o) : Poly2::monomial(carry, o, d - 1);
        }
        auto it0 = row.find(0);
        carry += it0 == row.end() ? Rational(0) : it0->second;
        if (carry != 0) return false;
    }
    q = out;
    return true;
}

}  // namespace

bool divide_by_factor(const Poly2& p, Factor f, Poly2& q) {
    if (p.is_zero()) {
        q = p;
        return true;
    }
    switch (f) {
        case Factor::S:
        case Factor::T: {
            Poly2 out;
            for (const auto& [k, c] : p.terms()) {
                int d = f == Factor::S ? k.first : k.second;
                if (d == 0) return false;
                out += f == Factor::S ? Poly2::monomial(c, k.first - 1, k.second)
                                      : Poly2::monomial(c, k.first, k.second - 1);
            }
            q = out;
            return true;
        }
        case Factor::SM1: return divide_linear(p, 0, q);
        case Factor::TM1: return divide_linear(p, 1, q);
        case Factor::STM1: {
            // {st − 1} is a Gröbner basis; reduce the lex-leading st-divisible term repeatedly
            Poly2 rem = p, out;
            while (true) {
                const std::pair<const Poly2::Key, Rational>* lead = nullptr;
                for (auto it = rem.terms().rbegin(); it != rem.terms().rend(); ++it)
                    if (it->first.first >= 1 && it->first.second >= 1) {
                        lead = &*it;
                        break;
                    }
                if (!lead) break;
                Poly2 qt = Poly2::monomial(lead->second, lead->first.first - 1, lead->first.second - 1);
                out += qt;
                rem -= qt * factor_poly(Factor::STM1);
            }
            if (!rem.is_zero()) return false;
            q = out;
            return true;
        }
    }
    return false;
}

RatFunc::RatFunc(Poly2 num, std::array<int, kFactorCount> den) : num_(std::move(num)), den_(den) {
    for (int e : den_)
        if (e < 0) throw std::domain_error("negative denominator exponent");
    normalize();
}

RatFunc RatFunc::power(Factor f, int e) {
    if (e >= 0) return RatFunc(factor_poly(f).pow(e));
    std::array<int, kFactorCount> den{};
    den[static_cast<int>(f)] = -e;
    return RatFunc(Poly2(1), den);
}

void RatFunc::normalize() {
    if (num_.is_zero()) {
        den_.fill(0);
        return;
    }
    for (int f = 0; f < kFactorCount; ++f)
        while (den_[f] > 0) {
            Poly2 q;
            if (!divide_by_factor(num_, static_cast<Factor>(f), q)) break;
            num_ = std::move(q);
            --den_[f];
        }
}

Poly2 RatFunc::den_poly() const {
    Poly2 d(1);
    for (int f = 0; f < kFactorCount; ++f) d = d * factor_poly(static_cast<Factor>(f)).pow(den_[f]);
    return d;
}

RatFunc& RatFunc::operator+=(const RatFunc& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    std::array<int, kFactorCount> den{};
    Poly2 a = num_, b = o.num_;
    for (int f = 0; f < kFactorCount; ++f) {
        den[f] = std::max(den_[f], o.den_[f]);
        a = a * factor_poly(static_cast<Factor>(f)).pow(den[f] - den_[f]);
        b = b * factor_poly(static_cast<Factor>(f)).pow(den[f] - o.den_[f]);
    }
    num_ = a + b;
    den_ = den;
    normalize();
    return *this;
}

RatFunc& RatFunc::operator-=(const RatFunc& o) { return *this += -o; }

RatFunc& RatFunc::operator*=(const RatFunc& o) {
    num_ = num_ * o.num_;
    for (int f = 0; f < kFactorCount; ++f) den_[f] += o.den_[f];
    normalize();
    return *this;
}

RatFunc RatFunc::operator-() const {
    RatFunc r(*this);
    r.num_ = -r.num_;
    return r;
}

RatFunc RatFunc::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero rational function");
    Poly2 rest = num_;
    std::array<int, kFactorCount> num_exp{};
    for (int f = 0; f < kFactorCount; ++f) {
        Poly2 q;
        while (!rest.is_constant() && divide_by_factor(rest, static_cast<Factor>(f), q)) {
            rest = q;
            ++num_exp[f];
        }
    }
    if (!rest.is_constant())
        throw std::domain_error("numerator does not factor over {s,t,s-1,t-1,st-1}");
    RatFunc r(Poly2(Rational(1) / rest.constant_term()), num_exp);
    for (int f = 0; f < kFactorCount; ++f) r *= RatFunc(factor_poly(static_cast<Factor>(f)).pow(den_[f]));
    return r;
}

RatFunc RatFunc::pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    RatFunc r(Rational(1)), b(*this);
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

}  // namespace modcurv
