#pragma once

#include "modcurv/polynomial.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <array>
#include <string>

namespace modcurv {

using HighPrecision = boost::multiprecision::cpp_bin_float_50;

enum class LogBasis : int { ONE = 0, LOG_S = 1, LOG_ST = 2 };

// Σ_b part_b(s,t) · basis_b with basis {1, log s, log(st)}.
class SymbolicFunction {
public:
    SymbolicFunction() = default;
    SymbolicFunction(const RatFunc& one) { parts_[0] = one; }  // NOLINT(implicit)
    SymbolicFunction(const RatFunc& one, const RatFunc& log_s, const RatFunc& log_st)
        : parts_{one, log_s, log_st} {}

    const RatFunc& part(LogBasis b) const { return parts_[static_cast<int>(b)]; }
    RatFunc& part(LogBasis b) { return parts_[static_cast<int>(b)]; }
    bool is_zero() const;
    bool has_logs() const;
    bool uses_t() const;

    SymbolicFunction& operator+=(const SymbolicFunction& o);
    SymbolicFunction& operator-=(const SymbolicFunction& o);
    SymbolicFunction& operator*=(const RatFunc& r);
    friend SymbolicFunction operator+(SymbolicFunction a, const SymbolicFunction& b) { return a += b; }
    friend SymbolicFunction operator-(SymbolicFunction a, const SymbolicFunction& b) { return a -= b; }
    friend SymbolicFunction operator*(SymbolicFunction a, const RatFunc& r) { return a *= r; }
    // one factor must be log-free
    friend SymbolicFunction operator*(const SymbolicFunction& a, const SymbolicFunction& b);
    friend bool operator==(const SymbolicFunction& a, const SymbolicFunction& b);

    // Direct evaluation (no limit handling); throws on a vanishing denominator.
    HighPrecision eval_direct(const HighPrecision& s, const HighPrecision& t) const;

    // Infix rendering over a common denominator, e.g.
    // "(-2*s + 2 + (s + 1)*log(s)) / (2*(s-1)^3)".
    std::string str() const;

private:
    std::array<RatFunc, 3> parts_;
};

// Parses the infix grammar produced by str(): numbers, s, t, log(s), log(s*t),
// + - * / ^ and parentheses. Divisors must be log-free and factor over the basis.
SymbolicFunction parse_symbolic_function(const std::string& text);

constexpr double kRichardsonZone = 1e-4;
constexpr double kRichardsonStep = 2e-4;

// Numeric evaluation for s, t > 0; within kRichardsonZone of {s=1, t=1, st=1}
// (only the factors actually present in the denominators) the value is the
// 4-point Richardson limit along the direction (1, 2).
double eval_function(const SymbolicFunction& f, double s, double t = 1.0);

}  // namespace modcurv
