#include "modcurv/numeric_oracle.hpp"

#include "modcurv/errors.hpp"
#include "modcurv/modular.hpp"
#include "modcurv/series.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace modcurv {

namespace {

void check_family(const FamilySpec& f) {
    if (f.exps.size() != 2 && f.exps.size() != 3) throw UsageError("family must be K(p,q) or H(p,q,l)");
}

double family_closed_form(const FamilySpec& f, const SymbolicFunction& fam, double s, double t) {
    return std::pow(s, f.shift_s) * eval_function(fam, s, t);
}

}  // namespace

double matrix_rearrangement_check(const std::vector<double>& kappa,
                                  const std::vector<std::vector<double>>& rhos, const FamilySpec& family,
                                  const QuadratureSpec& spec) {
    check_family(family);
    const std::size_t n = kappa.size();
    const std::size_t nrho = family.exps.size() - 1;
    if (rhos.size() != nrho) throw UsageError("wrong number of ρ matrices for the family");
    for (const auto& r : rhos)
        if (r.size() != n * n) throw UsageError("ρ size does not match the spectrum");
    for (double k : kappa)
        if (!(k > 0)) throw UsageError("spectrum must be positive");

    const int p = family.exps[0], q = family.exps[1], l = nrho == 2 ? family.exps[2] : 0;
    const int w = p + q + l - 2, j = family.shift_s;
    auto f0 = [=](double x) { return std::pow(x, w - j) * std::pow(x + 1, -p); };
    auto f1 = [=](double x) { return std::pow(x, j) * std::pow(x + 1, -q); };
    auto f2 = [=](double x) { return std::pow(x + 1, -l); };
    const SymbolicFunction fam = family_integral_dim2(family.exps);

    auto at = [n](const std::vector<double>& m, std::size_t a, std::size_t b) { return m[a * n + b]; };
    double max_diff = 0, max_ref = 0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t c = 0; c < n; ++c) {
            double lhs = 0, rhs = 0;
            if (nrho == 1) {
                const double ka = kappa[a], kc = kappa[c];
                auto g = [&](double r) { return ka * f0(r * ka) * f1(r * kc); };
                lhs = integrate_half_line(g, spec).value * at(rhos[0], a, c);
                rhs = family_closed_form(family, fam, kc / ka, 1.0) * at(rhos[0], a, c);
            } else {
                for (std::size_t b = 0; b < n; ++b) {
                    const double ka = kappa[a], kb = kappa[b], kc = kappa[c];
                    const double weight = at(rhos[0], a, b) * at(rhos[1], b, c);
                    auto g = [&](double r) { return ka * f0(r * ka) * f1(r * kb) * f2(r * kc); };
                    lhs += integrate_half_line(g, spec).value * weight;
                    rhs += family_closed_form(family, fam, kb / ka, kc / kb) * weight;
                }
            }
            max_diff = std::max(max_diff, std::abs(lhs - rhs));
            max_ref = std::max(max_ref, std::abs(rhs));
        }
    return max_ref > 0 ? max_diff / max_ref : max_diff;
}

double matrix_rearrangement_check(int dim, std::uint64_t seed, const FamilySpec& family,
                                  const QuadratureSpec& spec) {
    if (dim < 1 || dim > 12) throw UsageError("matrix dimension must be in 1..12");
    check_family(family);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> eig(0.2, 5.0), entry(-1.0, 1.0);

    Eigen::MatrixXd x(dim, dim);
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) x(a, b) = entry(rng);
    Eigen::MatrixXd qmat = Eigen::HouseholderQR<Eigen::MatrixXd>(x).householderQ();
    Eigen::VectorXd d(dim);
    for (int a = 0; a < dim; ++a) d(a) = eig(rng);
    Eigen::MatrixXd k = qmat * d.asDiagonal() * qmat.transpose();
    k = 0.5 * (k + k.transpose());

    // the operator integral diagonalizes in k's eigenbasis
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
    const Eigen::MatrixXd& v = es.eigenvectors();
    std::vector<double> kappa(es.eigenvalues().data(), es.eigenvalues().data() + dim);

    std::vector<Eigen::MatrixXd> rho_orig;
    std::vector<std::vector<double>> rho_eig;
    for (std::size_t r = 0; r + 1 < family.exps.size(); ++r) {
        Eigen::MatrixXd m(dim, dim);
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b) m(a, b) = entry(rng);
        rho_orig.push_back(m);
        Eigen::MatrixXd me = v.transpose() * m * v;
        std::vector<double> flat(static_cast<std::size_t>(dim * dim));
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b) flat[static_cast<std::size_t>(a * dim + b)] = me(a, b);
        rho_eig.push_back(std::move(flat));
    }
    return matrix_rearrangement_check(kappa, rho_eig, family, spec);
}

namespace {

// Truncates to the box |r|∞ ≤ cap; dropping anything above 1e-14 is an overflow.
void cap_support(FloatElement& a, int cap) {
    const double kNoise = 1e-20;
    FloatElement out(a.rank());
    for (const auto& [r, c] : a.coeffs()) {
        bool inside = true;
        for (int j = 0; j < a.rank(); ++j) inside = inside && std::abs(r[j]) <= cap;
        if (!inside) {
            if (std::abs(c) > 1e-14)
                throw PipelineError("numeric_oracle", "support overflow beyond cap " + std::to_string(cap));
            continue;
        }
        if (std::abs(c) > kNoise) out.add(r, c);
    }
    a = std::move(out);
}

FloatElement mul(const FloatElement& a, const FloatElement& b, const SkewMatrix& th, int cap) {
    FloatElement r = deformed_product(a, b, th);
    cap_support(r, cap);
    return r;
}

// smallest order whose exponential tail (2‖h‖)^{n+1}/(n+1)! is below 1e-17
int exp_order(double norm) {
    double term = 1;
    for (int n = 0; n < 200; ++n) {
        term *= 2 * norm / (n + 1);
        if (term < 1e-17) return std::max(n, 1);
    }
    return 200;
}

FloatElement exp_capped(const FloatElement& h, const SkewMatrix& th, int cap) {
    FloatElement result = one_element<std::complex<double>>(h.rank(), th);
    FloatElement power = result;
    const int order = exp_order(h.l1_norm());
    for (int n = 1; n <= order; ++n) {
        power = mul(power, h, th, cap).scaled(Rational(1, n));
        result += power;
    }
    return result;
}

const CurvatureReport& dim2_report() {
    static const CurvatureReport r = derive_curvature(2, OperatorKind::KDelta);
    return r;
}

}  // namespace

double gauss_bonnet_residual(const FloatElement& h, const SkewMatrix& theta, int series_order, int support_cap) {
    const auto& r = dim2_report();
    return gauss_bonnet_residual(h, theta, series_order, support_cap, r.K, r.G);
}

double gauss_bonnet_residual(const FloatElement& h, const SkewMatrix& theta, int series_order, int support_cap,
                             const SymbolicFunction& K, const SymbolicFunction& G) {
    if (h.rank() != 2 || theta.rank() != 2) throw UsageError("Gauss-Bonnet check runs on the 2-torus");
    if (series_order < 0) throw UsageError("series order must be nonnegative");
    if (support_cap < 1) throw UsageError("support cap must be positive");
    if (h.l1_norm() > 0.2 + 1e-15) throw PreconditionError("gauss_bonnet_residual: ‖h‖ exceeds 0.2");
    if (!is_self_adjoint(h, 1e-12 * std::max(1.0, h.l1_norm())))
        throw PreconditionError("gauss_bonnet_residual: h is not self-adjoint");
    if (h.is_zero()) return 0.0;

    FloatElement hc = h;
    cap_support(hc, support_cap);
    const FloatElement k = exp_capped(hc, theta, support_cap);
    const FloatElement kinv = exp_capped(hc.scaled(Rational(-1)), theta, support_cap);
    const FloatElement kinv2 = mul(kinv, kinv, theta, support_cap);

    const BiSeries kc = taylor_at_identity(K, series_order);
    const BiSeries gc = taylor_at_identity(G, series_order);

    // log Δ = −ad_h : ρ ↦ ρh − hρ
    auto L = [&](const FloatElement& rho) {
        return mul(rho, hc, theta, support_cap) - mul(hc, rho, theta, support_cap);
    };
    auto powers = [&](const FloatElement& rho) {
        std::vector<FloatElement> out{rho};
        for (int n = 1; n <= series_order; ++n) out.push_back(L(out.back()));
        return out;
    };

    FloatElement lap(2), quad(2);
    FloatElement Kpart(2), Gpart(2);
    for (int j = 1; j <= 2; ++j) {
        const FloatElement dk = derivation(k, j, theta);
        lap += derivation(dk, j, theta);
        const auto Ld = powers(dk);
        for (int a = 0; a <= series_order; ++a)
            for (int b = 0; a + b <= series_order; ++b) {
                const double c = to_double(gc.at(a, b));
                if (c == 0) continue;
                Gpart += mul(Ld[a], Ld[b], theta, support_cap).scaled(std::complex<double>(c, 0));
            }
    }
    const auto Ll = powers(lap);
    for (int n = 0; n <= series_order; ++n) {
        const double c = to_double(kc.at(n, 0));
        if (c != 0) Kpart += Ll[n].scaled(std::complex<double>(c, 0));
    }
    FloatElement R = mul(kinv, Kpart, theta, support_cap) + mul(kinv2, Gpart, theta, support_cap);
    return std::abs(trace(R, std::complex<double>(0.0)));
}

ScalingResult gauss_bonnet_scaling(const FloatElement& h, const SkewMatrix& theta, int series_order,
                                   int support_cap, double floor) {
    ScalingResult out;
    out.base = gauss_bonnet_residual(h, theta, series_order, support_cap);
    out.pass = true;
    for (double e : {0.5, 0.25}) {
        const double r = gauss_bonnet_residual(h.scaled(std::complex<double>(e, 0)), theta, series_order,
                                               support_cap);
        out.eps.push_back(e);
        out.residuals.push_back(r);
        if (!(r <= 2 * e * e * out.base + floor)) out.pass = false;
    }
    return out;
}

}  // namespace modcurv

namespace modcurv {

FloatElement sample_weyl_log(double norm) {
    const double u = norm / 10;
    FloatElement h(2);
    h.add(std::vector<int>{1, 0}, {2 * u, 0});
    h.add(std::vector<int>{-1, 0}, {2 * u, 0});
    h.add(std::vector<int>{0, 1}, {0, 2 * u});
    h.add(std::vector<int>{0, -1}, {0, -2 * u});
    h.add(std::vector<int>{1, 1}, {u, 0});
    h.add(std::vector<int>{-1, -1}, {u, 0});
    return h;
}

}  // namespace modcurv
