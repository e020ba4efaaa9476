#include "modcurv/quadrature.hpp"

#include "modcurv/errors.hpp"

#include <array>
#include <cmath>

namespace modcurv {

namespace {

constexpr std::array<double, 8> kNodes{0.991455371120812639206854697526329,
                                       0.949107912342758524526189684047851,
                                       0.864864423359769072789712788640926,
                                       0.741531185599394439863864773280788,
                                       0.586087235467691130294144845693013,
                                       0.405845151377397166906606412076961,
                                       0.207784955007898467600689403773245,
                                       0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod{0.022935322010529224963732008058970,
                                         0.063092092629978553290700663189204,
                                         0.104790010322250183839876322541518,
                                         0.140653259715525918745189590510238,
                                         0.169004726639267902826583426598550,
                                         0.190350578064785409913256402421014,
                                         0.204432940075298892414161999234649,
                                         0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGauss{0.129484966168869693270611432679082,
                                       0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975,
                                       0.417959183673469387755102040816327};

void gk15(const std::function<double(double)>& f, double a, double b, double& k15, double& err) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double k = kKronrod[7] * fc, g = kGauss[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double x = h * kNodes[i];
        const double v = f(c - x) + f(c + x);
        k += kKronrod[i] * v;
        if (i % 2 == 1) g += kGauss[i / 2] * v;
    }
    k15 = k * h;
    err = std::abs((k - g) * h);
}

void adapt(const std::function<double(double)>& f, double a, double b, double tol, int depth,
           const QuadratureSpec& spec, QuadratureResult& out) {
    double v, e;
    gk15(f, a, b, v, e);
    if (e <= tol || depth >= spec.max_depth) {
        if (e > tol) out.converged = false;
        out.value += v;
        out.error += e;
        return;
    }
    const double mid = 0.5 * (a + b);
    adapt(f, a, mid, 0.5 * tol, depth + 1, spec, out);
    adapt(f, mid, b, 0.5 * tol, depth + 1, spec, out);
}

void check_spec(const QuadratureSpec& spec) {
    if (!(spec.abs_tol > 0)) throw UsageError("quadrature tolerance must be positive");
    if (spec.max_depth < 1) throw UsageError("quadrature depth must be positive");
}

void check_family(const std::vector<int>& exps, double s, double t) {
    if (exps.empty() || exps.size() > 3) throw UsageError("family needs 1 to 3 exponents");
    int total = 0;
    for (int n : exps) {
        if (n < 0) throw UsageError("negative family exponent");
        total += n;
    }
    if (total < 2) throw DivergentIntegral("numeric_oracle", "family degree below 2");
    if (!(s > 0) || !(t > 0)) throw UsageError("s and t must be positive");
}

}  // namespace

QuadratureResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureSpec& spec) {
    check_spec(spec);
    QuadratureResult out;
    adapt(f, a, b, spec.abs_tol, 0, spec, out);
    return out;
}

QuadratureResult integrate_half_line(const std::function<double(double)>& f, const QuadratureSpec& spec) {
    auto g = [&f](double u) {
        if (u >= 1.0) return 0.0;
        const double v = 1.0 - u;
        return f(u / v) / (v * v);
    };
    return integrate_interval(g, 0.0, 1.0, spec);
}

double quad_r_integral(const std::vector<int>& exps, double s, double t, const QuadratureSpec& spec) {
    check_family(exps, s, t);
    const std::array<double, 3> sigma{1.0, s, s * t};
    int w = -2;
    for (int n : exps) w += n;
    auto f = [&](double r) {
        double v = std::pow(r, w);
        for (std::size_t i = 0; i < exps.size(); ++i) v *= std::pow(sigma[i] * r + 1.0, -exps[i]);
        return v;
    };
    return integrate_half_line(f, spec).value;
}

double quad_r_integral_dim_m(const std::vector<int>& exps, double s, double t, int m,
                             const QuadratureSpec& spec) {
    check_family(exps, s, t);
    if (m < 4 || m % 2) throw UsageError("dimension must be even and at least 4");
    const std::array<double, 3> sigma{1.0, s, s * t};
    const int j0 = m / 2 - 1;
    int total = 0;
    for (int n : exps) total += n;
    const int power = total + m / 2 - 3;
    // ∂_λ^{j} (x − λ)^{−n} = (n)_j (x − λ)^{−n−j}; Leibniz over the factors
    auto rising = [](int n, int j) {
        double v = 1;
        for (int k = 0; k < j; ++k) v *= n + k;
        return v;
    };
    auto f = [&](double r) {
        double acc = 0;
        const std::size_t nf = exps.size();
        std::array<int, 3> split{};
        std::function<void(std::size_t, int, double)> rec = [&](std::size_t i, int left, double mult) {
            if (i + 1 == nf) {
                split[i] = left;
                double v = mult;
                for (std::size_t k = 0; k < nf; ++k) {
                    v *= rising(exps[k], split[k]) * std::pow(sigma[k] * r + 1.0, -exps[k] - split[k]);
                    v /= std::tgamma(split[k] + 1.0);
                }
                acc += v;
                return;
            }
            for (int j = 0; j <= left; ++j) {
                split[i] = j;
                rec(i + 1, left - j, mult);
            }
        };
        rec(0, j0, std::tgamma(j0 + 1.0));
        return std::pow(r, power) * acc;
    };
    return integrate_half_line(f, spec).value;
}

}  // namespace modcurv
