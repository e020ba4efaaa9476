#include "jet_oracle.hpp"

#include <numeric>
#include <stdexcept>

namespace modcurv::testing {

namespace {

int degree(const std::vector<int>& alpha) { return std::accumulate(alpha.begin(), alpha.end(), 0); }

}  // namespace

Jet Jet::constant(int m, int valid, const Mat& c) {
    Jet j(m, static_cast<int>(c.rows()), valid);
    j.add(std::vector<int>(m, 0), c);
    return j;
}

Jet Jet::coordinate(int m, int n, int valid, int a, double base) {
    Jet j(m, n, valid);
    j.add(std::vector<int>(m, 0), base * Mat::Identity(n, n));
    std::vector<int> e(m, 0);
    e[a] = 1;
    j.add(e, Mat::Identity(n, n));
    return j;
}

void Jet::add(const std::vector<int>& alpha, const Mat& c) {
    if (degree(alpha) > valid_) return;
    auto it = c_.find(alpha);
    if (it == c_.end())
        c_.emplace(alpha, c);
    else
        it->second += c;
}

Mat Jet::value() const {
    auto it = c_.find(std::vector<int>(m_, 0));
    return it == c_.end() ? Mat::Zero(n_, n_) : it->second;
}

Jet& Jet::operator+=(const Jet& o) {
    valid_ = std::min(valid_, o.valid_);
    for (const auto& [a, c] : o.c_) add(a, c);
    return *this;
}

Jet operator-(const Jet& a, const Jet& b) { return a + std::complex<double>(-1.0) * b; }

Jet operator*(const Jet& a, const Jet& b) {
    Jet r(a.m_, a.n_, std::min(a.valid_, b.valid_));
    for (const auto& [x, cx] : a.c_)
        for (const auto& [y, cy] : b.c_) {
            std::vector<int> z(a.m_);
            for (int i = 0; i < a.m_; ++i) z[i] = x[i] + y[i];
            r.add(z, cx * cy);
        }
    return r;
}

Jet operator*(std::complex<double> c, const Jet& a) {
    Jet r(a.m_, a.n_, a.valid_);
    for (const auto& [x, cx] : a.c_) r.add(x, c * cx);
    return r;
}

Jet Jet::derivative(int a) const {
    Jet r(m_, n_, valid_ - 1);
    for (const auto& [x, c] : c_) {
        if (x[a] == 0) continue;
        std::vector<int> y = x;
        --y[a];
        r.add(y, static_cast<double>(x[a]) * c);
    }
    return r;
}

// (A₀ + N)⁻¹ = Σ_j (−A₀⁻¹N)^j A₀⁻¹, N nilpotent to the valid degree
Jet Jet::inverse() const {
    const Mat x0 = value().inverse();
    Jet nil = *this - constant(m_, valid_, value());
    Jet step = std::complex<double>(-1.0) * (constant(m_, valid_, x0) * nil);
    Jet term = constant(m_, valid_, x0);
    Jet sum = term;
    for (int j = 1; j <= valid_; ++j) {
        term = step * term;
        sum += term;
    }
    return sum;
}

namespace {

struct Symbols {
    // x-derivatives at x₀ of each p_μ as jets in ξ: p[μ][0] value, p[μ][1+c] ∂_c, p[μ][1+m+c·m+d] ∂_c∂_d
    std::vector<std::vector<Jet>> p;
};

int idx1(int c) { return 1 + c; }
int idx2(int m, int c, int d) { return 1 + m + c * m + d; }

}  // namespace

Mat oracle_resolvent(int kappa, const MatrixModel& mm, OracleOperator op) {
    if (kappa < 0 || kappa > 2) throw std::invalid_argument("oracle_resolvent: kappa in {0,1,2}");
    const int m = mm.m, n = mm.n, deg = 4;
    const Mat id = Mat::Identity(n, n);
    auto cst = [&](const Mat& c) { return Jet::constant(m, deg, c); };

    std::vector<Jet> xi;
    for (int a = 0; a < m; ++a) xi.push_back(Jet::coordinate(m, n, deg, a, mm.xi(a)));
    Jet q(m, n, deg);
    std::vector<Jet> dq(m, Jet(m, n, deg));  // ∂|ξ|²/∂ξ_a as a function of ξ
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            q += std::complex<double>(mm.ginv(a, b)) * (xi[a] * xi[b]);
            dq[a] += std::complex<double>(2 * mm.ginv(a, b)) * xi[b];
        }

    const int slots = 1 + m + m * m;
    Symbols s;
    s.p.assign(3, std::vector<Jet>(slots, Jet(m, n, deg)));
    // p₂ = k(x)|ξ|² − λ
    s.p[2][0] = cst(mm.k) * q - cst(mm.lambda * id);
    for (int c = 0; c < m; ++c) {
        s.p[2][idx1(c)] = cst(mm.grad[c]) * q;
        for (int d = 0; d < m; ++d) s.p[2][idx2(m, c, d)] = cst(mm.hess[c][d]) * q;
    }
    if (op == OracleOperator::NC4Tori) {
        // p₁ = (−i/2) ∂_a k(x) ∂|ξ|²/∂ξ_a
        const std::complex<double> mi2(0.0, -0.5);
        for (int a = 0; a < m; ++a) {
            s.p[1][0] += mi2 * (cst(mm.grad[a]) * dq[a]);
            for (int c = 0; c < m; ++c) s.p[1][idx1(c)] += mi2 * (cst(mm.hess[a][c]) * dq[a]);
        }
        // p₀ = g^{ab}(∂_a∂_b k + ∂_a k k⁻¹ ∂_b k)
        Mat p0 = Mat::Zero(n, n);
        const Mat kinv = mm.k.inverse();
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) p0 += mm.ginv(a, b) * (mm.hess[a][b] + mm.grad[a] * kinv * mm.grad[b]);
        s.p[0][0] = cst(p0);
    }

    // (−i)^{|α|}/α! ∂_ξ^α b ∂_x^α p, summed over |α| = j
    auto compose = [&](int j, const Jet& b, int mu) {
        const auto& p = s.p[mu];
        if (j == 0) return b * p[0];
        Jet out(m, n, deg);
        if (j == 1) {
            for (int c = 0; c < m; ++c) out += std::complex<double>(0.0, -1.0) * (b.derivative(c) * p[idx1(c)]);
            return out;
        }
        for (int c = 0; c < m; ++c)
            for (int d = 0; d < m; ++d)
                out += std::complex<double>(-0.5) * (b.derivative(c).derivative(d) * p[idx2(m, c, d)]);
        return out;
    };

    std::vector<Jet> b{s.p[2][0].inverse()};
    for (int k = 1; k <= kappa; ++k) {
        Jet sum(m, n, deg);
        for (int nu = 0; nu < k; ++nu)
            for (int j = 0; j <= 2; ++j)
                for (int mu = 0; mu <= 2; ++mu)
                    if (j + nu + 2 - mu == k) sum += compose(j, b[nu], mu);
        b.push_back(std::complex<double>(-1.0) * (sum * b[0]));
    }
    if (b[kappa].valid() < 0) throw std::logic_error("jet degree too low");
    return b[kappa].value();
}

}  // namespace modcurv::testing
