#include "modcurv/symbolic_function.hpp"

#include "modcurv/errors.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace modcurv {

bool SymbolicFunction::is_zero() const {
    for (const auto& p : parts_)
        if (!p.is_zero()) return false;
    return true;
}

bool SymbolicFunction::has_logs() const { return !parts_[1].is_zero() || !parts_[2].is_zero(); }

bool SymbolicFunction::uses_t() const {
    if (!parts_[2].is_zero()) return true;
    for (const auto& p : parts_) {
        if (p.num().uses_t()) return true;
        const auto& d = p.den();
        if (d[static_cast<int>(Factor::T)] || d[static_cast<int>(Factor::TM1)] ||
            d[static_cast<int>(Factor::STM1)])
            return true;
    }
    return false;
}

SymbolicFunction& SymbolicFunction::operator+=(const SymbolicFunction& o) {
    for (int b = 0; b < 3; ++b) parts_[b] += o.parts_[b];
    return *this;
}

SymbolicFunction& SymbolicFunction::operator-=(const SymbolicFunction& o) {
    for (int b = 0; b < 3; ++b) parts_[b] -= o.parts_[b];
    return *this;
}

SymbolicFunction& SymbolicFunction::operator*=(const RatFunc& r) {
    for (auto& p : parts_) p *= r;
    return *this;
}

SymbolicFunction operator*(const SymbolicFunction& a, const SymbolicFunction& b) {
    if (!a.has_logs()) return b * a.parts_[0];
    if (!b.has_logs()) return a * b.parts_[0];
    throw std::domain_error("product of two logarithmic terms is outside the basis");
}

bool operator==(const SymbolicFunction& a, const SymbolicFunction& b) {
    for (int k = 0; k < 3; ++k)
        if (!(a.parts_[k] == b.parts_[k])) return false;
    return true;
}

HighPrecision SymbolicFunction::eval_direct(const HighPrecision& s, const HighPrecision& t) const {
    HighPrecision v = parts_[0].eval(s, t);
    if (!parts_[1].is_zero()) v += parts_[1].eval(s, t) * log(s);
    if (!parts_[2].is_zero()) v += parts_[2].eval(s, t) * log(s * t);
    return v;
}

std::string SymbolicFunction::str() const {
    if (is_zero()) return "0";
    std::array<int, kFactorCount> den{};
    for (const auto& p : parts_)
        if (!p.is_zero())
            for (int f = 0; f < kFactorCount; ++f) den[f] = std::max(den[f], p.den()[f]);
    std::array<Poly2, 3> nums;
    for (int b = 0; b < 3; ++b) {
        if (parts_[b].is_zero()) continue;
        Poly2 n = parts_[b].num();
        for (int f = 0; f < kFactorCount; ++f)
            n = n * factor_poly(static_cast<Factor>(f)).pow(den[f] - parts_[b].den()[f]);
        nums[b] = n;
    }
    // clear rational denominators into one positive integer constant
    Integer lcm_den = 1;
    for (const auto& n : nums)
        for (const auto& [k, c] : n.terms())
            lcm_den = boost::multiprecision::lcm(lcm_den, boost::multiprecision::denominator(c));
    for (auto& n : nums) n *= Rational(lcm_den);

    std::string top;
    auto append = [&](const std::string& piece) {
        if (top.empty()) {
            top = piece;
        } else if (piece[0] == '-') {
            top += " - " + piece.substr(1);
        } else {
            top += " + " + piece;
        }
    };
    if (!nums[0].is_zero()) append(nums[0].str());
    const char* logs[3] = {"", "log(s)", "log(s*t)"};
    for (int b = 1; b < 3; ++b) {
        if (nums[b].is_zero()) continue;
        const auto& n = nums[b];
        if (n.is_constant()) {
            Rational c = n.constant_term();
            if (c == 1)
                append(logs[b]);
            else if (c == -1)
                append(std::string("-") + logs[b]);
            else
                append(to_string(c) + "*" + logs[b]);
        } else if (n.terms().size() == 1) {
            append(n.str() + "*" + logs[b]);
        } else {
            append("(" + n.str() + ")*" + logs[b]);
        }
    }
    std::string bottom;
    if (lcm_den != 1) bottom = lcm_den.str();
    for (int f = 0; f < kFactorCount; ++f) {
        if (den[f] == 0) continue;
        if (!bottom.empty()) bottom += "*";
        bottom += factor_name(static_cast<Factor>(f));
        if (den[f] > 1) bottom += "^" + std::to_string(den[f]);
    }
    if (bottom.empty()) return top;
    return "(" + top + ") / (" + bottom + ")";
}

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    SymbolicFunction parse() {
        SymbolicFunction v = expr();
        skip();
        if (pos_ != s_.size()) fail("trailing input");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& why) {
        throw UsageError("symbolic function parse error at " + std::to_string(pos_) + ": " + why);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    bool eat_word(const std::string& w) {
        skip();
        if (s_.compare(pos_, w.size(), w) == 0) {
            pos_ += w.size();
            return true;
        }
        return false;
    }

    SymbolicFunction expr() {
        SymbolicFunction v = term();
        while (true) {
            if (eat('+'))
                v += term();
            else if (eat('-'))
                v -= term();
            else
                return v;
        }
    }

    SymbolicFunction term() {
        SymbolicFunction v = unary();
        while (true) {
            if (eat('*')) {
                v = v * unary();
            } else if (eat('/')) {
                SymbolicFunction d = unary();
                if (d.has_logs()) fail("division by a logarithmic expression");
                try {
                    v *= d.part(LogBasis::ONE).inverse();
                } catch (const std::domain_error& e) {
                    fail(e.what());
                }
            } else {
                return v;
            }
        }
    }

    SymbolicFunction unary() {
        if (eat('-')) return SymbolicFunction() - unary();
        if (eat('+')) return unary();
        return power();
    }

    SymbolicFunction power() {
        SymbolicFunction base = atom();
        if (!eat('^')) return base;
        skip();
        bool neg = eat('-');
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer exponent");
        int e = std::stoi(s_.substr(start, pos_ - start));
        if (base.has_logs()) fail("power of a logarithmic expression");
        try {
            return SymbolicFunction(base.part(LogBasis::ONE).pow(neg ? -e : e));
        } catch (const std::domain_error& ex) {
            fail(ex.what());
        }
    }

    SymbolicFunction atom() {
        skip();
        if (eat('(')) {
            SymbolicFunction v = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (eat_word("log(")) {
            SymbolicFunction arg = expr();
            if (!eat(')')) fail("expected ')' after log argument");
            RatFunc a = arg.part(LogBasis::ONE);
            if (arg.has_logs()) fail("nested logarithm");
            if (a == RatFunc(Poly2::s())) return {RatFunc(), RatFunc(1), RatFunc()};
            if (a == RatFunc(Poly2::monomial(1, 1, 1))) return {RatFunc(), RatFunc(), RatFunc(1)};
            if (a == RatFunc(Poly2::t()))
                return {RatFunc(), RatFunc(-1), RatFunc(1)};  // log t = log(st) − log s
            fail("log argument must be s, t or s*t");
        }
        if (eat('s')) return SymbolicFunction(RatFunc(Poly2::s()));
        if (eat('t')) return SymbolicFunction(RatFunc(Poly2::t()));
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("unexpected character");
        return SymbolicFunction(RatFunc(Rational(Integer(s_.substr(start, pos_ - start)))));
    }

    std::string s_;
    std::size_t pos_ = 0;
};

bool near_singular(const SymbolicFunction& f, double s, double t) {
    std::array<int, kFactorCount> den{};
    for (auto b : {LogBasis::ONE, LogBasis::LOG_S, LogBasis::LOG_ST})
        for (int k = 0; k < kFactorCount; ++k) den[k] = std::max(den[k], f.part(b).den()[k]);
    return (den[static_cast<int>(Factor::SM1)] && std::abs(s - 1) < kRichardsonZone) ||
           (den[static_cast<int>(Factor::TM1)] && std::abs(t - 1) < kRichardsonZone) ||
           (den[static_cast<int>(Factor::STM1)] && std::abs(s * t - 1) < kRichardsonZone);
}

}  // namespace

SymbolicFunction parse_symbolic_function(const std::string& text) { return Parser(text).parse(); }

double eval_function(const SymbolicFunction& f, double s, double t) {
    if (!(s > 0) || !(t > 0)) throw UsageError("eval_function: arguments must be positive");
    if (!near_singular(f, s, t)) return f.eval_direct(HighPrecision(s), HighPrecision(t)).convert_to<double>();
    HighPrecision hs(s), ht(t), h(kRichardsonStep);
    static const int w[4] = {4, -6, 4, -1};
    HighPrecision acc(0);
    for (int j = 1; j <= 4; ++j) acc += w[j - 1] * f.eval_direct(hs + j * h, ht + 2 * j * h);
    return acc.convert_to<double>();
}

}  // namespace modcurv
