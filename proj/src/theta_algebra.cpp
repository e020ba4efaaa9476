#include "modcurv/theta_algebra.hpp"

#include <charconv>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace modcurv {

MultiIndex make_index(const std::vector<int>& r) {
    if (r.size() > static_cast<std::size_t>(kMaxRank)) throw UsageError("multi-index too long");
    MultiIndex m{};
    for (std::size_t j = 0; j < r.size(); ++j) m[j] = r[j];
    return m;
}

SkewMatrix::SkewMatrix(std::vector<std::vector<Rational>> entries) {
    n_ = static_cast<int>(entries.size());
    if (n_ < 1 || n_ > kMaxRank) throw UsageError("skew matrix rank out of range");
    Integer den_lcm = 1;
    values_.assign(n_, std::vector<double>(n_, 0.0));
    for (int a = 0; a < n_; ++a) {
        if (static_cast<int>(entries[a].size()) != n_) throw UsageError("skew matrix is not square");
        for (int b = 0; b < n_; ++b) {
            values_[a][b] = to_double(entries[a][b]);
            den_lcm = boost::multiprecision::lcm(den_lcm,
                                                 boost::multiprecision::denominator(entries[a][b]));
        }
    }
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b)
            if (entries[a][b] != -entries[b][a]) throw UsageError("matrix is not skew-symmetric");
    entries_ = std::move(entries);
    exact_ = true;
    Integer order = boost::multiprecision::lcm(Integer(4), 2 * den_lcm);
    if (order > 100000) throw UsageError("exact mode: θ denominators too large");
    root_order_ = order.convert_to<int>();
}

SkewMatrix SkewMatrix::from_doubles(std::vector<std::vector<double>> entries) {
    SkewMatrix m;
    m.n_ = static_cast<int>(entries.size());
    if (m.n_ < 1 || m.n_ > kMaxRank) throw UsageError("skew matrix rank out of range");
    for (int a = 0; a < m.n_; ++a) {
        if (static_cast<int>(entries[a].size()) != m.n_)
            throw UsageError("skew matrix is not square");
        for (int b = 0; b < m.n_; ++b)
            if (entries[a][b] != -entries[b][a]) throw UsageError("matrix is not skew-symmetric");
    }
    m.values_ = std::move(entries);
    return m;
}

SkewMatrix SkewMatrix::zero(int n) {
    return SkewMatrix(std::vector<std::vector<Rational>>(n, std::vector<Rational>(n, Rational(0))));
}

SkewMatrix SkewMatrix::standard(const Rational& theta) {
    return SkewMatrix({{Rational(0), theta}, {-theta, Rational(0)}});
}

SkewMatrix SkewMatrix::standard(double theta) { return from_doubles({{0.0, theta}, {-theta, 0.0}}); }

const Rational& SkewMatrix::exact_value(int a, int b) const {
    if (!exact_) throw UsageError("skew matrix has no exact entries");
    return entries_[a][b];
}

double SkewMatrix::pairing(const MultiIndex& r, const MultiIndex& l) const {
    double s = 0;
    for (int a = 0; a < n_; ++a) {
        if (r[a] == 0) continue;
        for (int b = 0; b < n_; ++b) s += r[a] * values_[a][b] * l[b];
    }
    return s;
}

Rational SkewMatrix::exact_pairing(const MultiIndex& r, const MultiIndex& l) const {
    if (!exact_) throw UsageError("exact mode requires rational skew entries");
    Rational s(0);
    for (int a = 0; a < n_; ++a) {
        if (r[a] == 0) continue;
        for (int b = 0; b < n_; ++b)
            if (l[b] != 0 && entries_[a][b] != 0) s += r[a] * entries_[a][b] * l[b];
    }
    return s;
}

int SkewMatrix::root_order() const {
    if (!exact_) throw UsageError("exact mode requires rational skew entries");
    return root_order_;
}

std::complex<double> chi(const SkewMatrix& theta, const std::vector<int>& r,
                         const std::vector<int>& l) {
    if (static_cast<int>(r.size()) != theta.rank() || static_cast<int>(l.size()) != theta.rank())
        throw UsageError("chi: dimension mismatch");
    return ScalarOps<std::complex<double>>::chi(theta, make_index(r), make_index(l));
}

namespace {

std::string index_text(const MultiIndex& r, int n) {
    std::string s;
    for (int j = 0; j < n; ++j) {
        if (j) s += ",";
        s += std::to_string(r[j]);
    }
    return s;
}

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    return out;
}

struct RawLine {
    std::vector<int> index;
    std::string re, im;
};

std::vector<RawLine> parse_lines(const std::string& text) {
    std::vector<RawLine> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw UsageError("element text line " + std::to_string(lineno) + ": missing ':'");
        RawLine raw;
        for (const auto& tok : split(line.substr(0, colon), ',')) {
            int v = 0;
            auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
                throw UsageError("element text line " + std::to_string(lineno) + ": bad index");
            raw.index.push_back(v);
        }
        auto vals = split(line.substr(colon + 1), ',');
        if (vals.size() != 2)
            throw UsageError("element text line " + std::to_string(lineno) + ": expected re,im");
        raw.re = vals[0];
        raw.im = vals[1];
        if (!out.empty() && out.front().index.size() != raw.index.size())
            throw UsageError("element text line " + std::to_string(lineno) + ": rank mismatch");
        out.push_back(std::move(raw));
    }
    if (out.empty()) throw UsageError("element text is empty");
    return out;
}

}  // namespace

std::string to_text(const FloatElement& a) {
    std::string s;
    for (const auto& [r, c] : a.coeffs())
        s += index_text(r, a.rank()) + " : " + fmt_double(c.real()) + "," + fmt_double(c.imag()) +
             "\n";
    return s;
}

std::string to_text(const ExactElement& a) {
    std::string s;
    for (const auto& [r, c] : a.coeffs()) {
        GaussRational z;
        if (!c.as_gauss(z)) throw UsageError("text form needs Gaussian-rational coefficients");
        s += index_text(r, a.rank()) + " : " + to_string(z.re) + "," + to_string(z.im) + "\n";
    }
    return s;
}

FloatElement parse_float_element(const std::string& text) {
    auto lines = parse_lines(text);
    FloatElement e(static_cast<int>(lines.front().index.size()));
    for (const auto& l : lines) {
        try {
            e.add(l.index, {std::stod(l.re), std::stod(l.im)});
        } catch (const std::logic_error&) {
            throw UsageError("bad floating coefficient '" + l.re + "," + l.im + "'");
        }
    }
    return e;
}

ExactElement parse_exact_element(const std::string& text, const SkewMatrix& theta) {
    auto lines = parse_lines(text);
    ExactElement e(static_cast<int>(lines.front().index.size()));
    for (const auto& l : lines)
        e.add(l.index, Cyclo(theta.root_order(),
                             GaussRational(parse_rational(l.re), parse_rational(l.im))));
    return e;
}

}  // namespace modcurv
