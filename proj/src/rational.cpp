#include "modcurv/rational.hpp"

#include "modcurv/errors.hpp"

#include <cctype>

namespace modcurv {

std::string to_string(const Rational& q) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    std::string s = numerator(q).str();
    if (denominator(q) != 1) s += "/" + denominator(q).str();
    return s;
}

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw UsageError("empty rational literal");
    auto slash = text.find('/');
    auto parse_int = [](const std::string& s) {
        std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (start == s.size()) throw UsageError("bad integer literal '" + s + "'");
        for (std::size_t k = start; k < s.size(); ++k)
            if (!std::isdigit(static_cast<unsigned char>(s[k])))
                throw UsageError("bad integer literal '" + s + "'");
        return Integer(s[0] == '+' ? s.substr(1) : s);
    };
    if (slash == std::string::npos) return Rational(parse_int(text));
    Integer den = parse_int(text.substr(slash + 1));
    if (den == 0) throw UsageError("zero denominator in '" + text + "'");
    return Rational(parse_int(text.substr(0, slash)), den);
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

std::string to_string(const GaussRational& z) {
    if (z.im == 0) return to_string(z.re);
    if (z.re == 0) return to_string(z.im) + "i";
    std::string im = to_string(z.im);
    if (im[0] != '-') im = "+" + im;
    return "(" + to_string(z.re) + im + "i)";
}

GaussRational parse_gauss_rational(const std::string& raw) {
    std::string text = raw;
    if (text.size() >= 2 && text.front() == '(' && text.back() == ')')
        text = text.substr(1, text.size() - 2);
    if (text.empty()) throw UsageError("empty coefficient");
    if (text.back() != 'i') return GaussRational(parse_rational(text));
    std::string body = text.substr(0, text.size() - 1);
    // split at the last sign that is not leading
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;)
        if (body[k] == '+' || body[k] == '-') {
            split = k;
            break;
        }
    if (split == std::string::npos) {
        if (body.empty() || body == "+") return {Rational(0), Rational(1)};
        if (body == "-") return {Rational(0), Rational(-1)};
        return {Rational(0), parse_rational(body)};
    }
    std::string im = body.substr(split);
    if (im == "+") im = "1";
    if (im == "-") im = "-1";
    return {parse_rational(body.substr(0, split)), parse_rational(im)};
}

Rational rational_pow(const Rational& base, int exponent) {
    if (exponent < 0) {
        if (base == 0) throw std::domain_error("negative power of zero");
        return rational_pow(Rational(1) / base, -exponent);
    }
    Rational result(1), b(base);
    while (exponent > 0) {
        if (exponent & 1) result *= b;
        b *= b;
        exponent >>= 1;
    }
    return result;
}

Rational factorial(int n) {
    if (n < 0) throw std::domain_error("factorial of negative integer");
    Rational r(1);
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

Rational binomial(int n, int k) {
    if (k < 0) return 0;
    Rational r(1);
    for (int j = 0; j < k; ++j) r = r * (n - j) / (j + 1);
    return r;
}

}  // namespace modcurv
