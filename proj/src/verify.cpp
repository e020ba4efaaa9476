#include "modcurv/verify.hpp"

#include "modcurv/cosphere.hpp"
#include "modcurv/errors.hpp"
#include "modcurv/modular.hpp"
#include "modcurv/numeric_oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace modcurv {

namespace {

double pick_tol(const VerifyOptions& o, double own) { return o.tol >= 0 ? o.tol : own; }

template <class S>
FourierElement<S> random_element(std::mt19937_64& rng, const SkewMatrix& th) {
    std::uniform_int_distribution<int> idx(-3, 3), coef(-3, 3), size(1, 8);
    FourierElement<S> e(2);
    const int n = size(rng);
    for (int k = 0; k < n; ++k) {
        std::vector<int> r{idx(rng), idx(rng)};
        GaussRational z(Rational(coef(rng)), Rational(coef(rng)));
        e.add(r, ScalarOps<S>::from_gauss(z, th));
    }
    return e;
}

double max_abs_diff(const FloatElement& a, const FloatElement& b) {
    double m = 0;
    const FloatElement d = a - b;
    for (const auto& [r, c] : d.coeffs()) m = std::max(m, std::abs(c));
    return m;
}

// Runs `law` on 100 random triples; returns the worst error (exact mode: count of failures).
template <class S, class Law>
double over_triples(std::uint64_t seed, const SkewMatrix& th, Law law) {
    std::mt19937_64 rng(seed);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        auto a = random_element<S>(rng, th);
        auto b = random_element<S>(rng, th);
        auto c = random_element<S>(rng, th);
        worst = std::max(worst, law(a, b, c));
    }
    return worst;
}

SkewMatrix exact_theta() { return SkewMatrix::standard(Rational(1, 3)); }
SkewMatrix float_theta() { return SkewMatrix::standard(1 / std::numbers::sqrt2); }

std::vector<CheckTask> algebra_checks() {
    std::vector<CheckTask> t;
    t.push_back([](const VerifyOptions& o) {
        const auto th = exact_theta();
        double e = over_triples<Cyclo>(o.seed, th, [&](const auto& a, const auto& b, const auto& c) {
            auto l = deformed_product(deformed_product(a, b, th), c, th);
            auto r = deformed_product(a, deformed_product(b, c, th), th);
            return (l - r).is_zero() ? 0.0 : 1.0;
        });
        return CheckResult{"algebra.associativity.exact", e, 0};
    });
    t.push_back([](const VerifyOptions& o) {
        const auto th = exact_theta();
        double e = over_triples<Cyclo>(o.seed + 1, th, [&](const auto& a, const auto& b, const auto&) {
            return (star(deformed_product(a, b, th)) - deformed_product(star(b), star(a), th)).is_zero() ? 0.0
                                                                                                         : 1.0;
        });
        return CheckResult{"algebra.star_antihomomorphism.exact", e, 0};
    });
    t.push_back([](const VerifyOptions& o) {
        const auto th = exact_theta();
        double e = over_triples<Cyclo>(o.seed + 2, th, [&](const auto& a, const auto& b, const auto&) {
            Cyclo z(th.root_order());
            auto ab = trace(deformed_product(a, b, th), z);
            auto ba = trace(deformed_product(b, a, th), z);
            // Θ = 0 product computed with the same cyclotomic order
            FourierElement<Cyclo> p(2);
            for (const auto& [r, x] : a.coeffs())
                for (const auto& [s, y] : b.coeffs()) {
                    MultiIndex k{};
                    for (int j = 0; j < kMaxRank; ++j) k[j] = r[j] + s[j];
                    Cyclo v = x;
                    v *= y;
                    p.add(k, v);
                }
            return (ab == ba && ab == trace(p, z)) ? 0.0 : 1.0;
        });
        return CheckResult{"algebra.trace_property.exact", e, 0};
    });
    t.push_back([](const VerifyOptions& o) {
        const auto th = exact_theta();
        double e = over_triples<Cyclo>(o.seed + 3, th, [&](const auto& a, const auto& b, const auto&) {
            double bad = 0;
            for (int j = 1; j <= 2; ++j) {
                auto l = derivation(deformed_product(a, b, th), j, th);
                auto r = deformed_product(derivation(a, j, th), b, th) + deformed_product(a, derivation(b, j, th), th);
                if (!(l - r).is_zero()) bad = 1;
            }
            return bad;
        });
        return CheckResult{"algebra.leibniz.exact", e, 0};
    });
    t.push_back([](const VerifyOptions& o) {
        const auto th = float_theta();
        double e = over_triples<std::complex<double>>(o.seed + 4, th, [&](const auto& a, const auto& b, const auto& c) {
            // relative to the size of the triple product
            const double scale = std::max(1.0, a.l1_norm() * b.l1_norm() * c.l1_norm());
            return max_abs_diff(deformed_product(deformed_product(a, b, th), c, th),
                                deformed_product(a, deformed_product(b, c, th), th)) /
                   scale;
        });
        return CheckResult{"algebra.associativity.float", e, pick_tol(o, 1e-12)};
    });
    t.push_back([](const VerifyOptions& o) {
        const auto th = float_theta();
        double e = over_triples<std::complex<double>>(o.seed + 5, th, [&](const auto& a, const auto& b, const auto&) {
            return max_abs_diff(star(deformed_product(a, b, th)), deformed_product(star(b), star(a), th));
        });
        return CheckResult{"algebra.star_antihomomorphism.float", e, pick_tol(o, 1e-12)};
    });
    t.push_back([](const VerifyOptions& o) {
        const auto th = float_theta();
        double e = over_triples<std::complex<double>>(o.seed + 6, th, [&](const auto& a, const auto& b, const auto&) {
            std::complex<double> z(0.0);
            return std::abs(trace(deformed_product(a, b, th), z) - trace(deformed_product(b, a, th), z));
        });
        return CheckResult{"algebra.trace_property.float", e, pick_tol(o, 1e-12)};
    });
    t.push_back([](const VerifyOptions& o) {
        const auto th = float_theta();
        const FloatElement h = sample_weyl_log(0.5);
        const int order = 16;
        auto p = deformed_product(exp_element(h, th, order), exp_element(h.scaled(Rational(-1)), th, order), th);
        p -= one_element<std::complex<double>>(2, th);
        // tail bound ‖h‖^{N+1}/(N+1)! for each factor, doubled
        const double bound = 2 * std::pow(0.5, order + 1) / std::tgamma(order + 2.0) * std::exp(0.5);
        return CheckResult{"algebra.exp_inverse.float", p.l1_norm(), pick_tol(o, std::max(bound, 1e-13))};
    });
    t.push_back([](const VerifyOptions& o) {
        std::mt19937_64 rng(o.seed + 7);
        std::uniform_int_distribution<int> idx(-5, 5);
        const auto th = float_theta();
        double e = 0;
        for (int i = 0; i < 100; ++i) {
            std::vector<int> r{idx(rng), idx(rng)}, q{idx(rng), idx(rng)}, l{idx(rng), idx(rng)};
            std::vector<int> rq{r[0] + q[0], r[1] + q[1]};
            auto x = chi(th, r, l);
            e = std::max({e, std::abs(std::abs(x) - 1.0), std::abs(x * chi(th, l, r) - 1.0),
                          std::abs(chi(th, rq, l) - x * chi(th, q, l))});
        }
        return CheckResult{"algebra.bicharacter", e, pick_tol(o, 1e-13)};
    });
    return t;
}

double expr_mismatch(const Expression& a, const Expression& b) { return canonicalize(a - b).is_zero() ? 0 : 1; }

std::vector<CheckTask> symbol_checks() {
    std::vector<CheckTask> t;
    t.push_back([](const VerifyOptions&) {
        double bad = 0;
        for (const auto& sym : {kdelta_symbols(), nc4tori_symbols()})
            for (int kappa = 0; kappa <= 2; ++kappa) {
                const Expression b = resolvent_b(kappa, sym);
                for (const auto& term : b.terms())
                    if (homogeneity(term) != -2 - kappa) ++bad;
            }
        return CheckResult{"symbols.homogeneity", bad, 0};
    });
    t.push_back([](const VerifyOptions&) {
        Expression b2 = resolvent_b(2, nc4tori_symbols());
        double bad = 0;
        if (!(canonicalize(b2) == b2)) ++bad;
        if (!(parse_expression(to_string(b2)) == b2)) ++bad;
        return CheckResult{"symbols.canonical_roundtrip", bad, 0};
    });
    t.push_back([](const VerifyOptions&) {
        const Expression b0 = Expression::atom(AtomKind::B0);
        double bad = 0;
        bad += expr_mismatch(vertical_derivative(b0, 1), parse_expression("-1 * b0^2 * k * DXi2[x1]"));
        bad += expr_mismatch(vertical_derivative(vertical_derivative(b0, 1), 2),
                             parse_expression("-1 * b0^2 * k * D2Xi2[x1,x2] + 2 * b0^3 * k^2 * DXi2[x1] * DXi2[x2]"));
        const Expression kxi = Expression::atom(AtomKind::K) * Expression::atom(AtomKind::Xi2);
        bad += expr_mismatch(horizontal_derivative(kxi, 1), parse_expression("GradK[x1] * Xi2"));
        bad += expr_mismatch(horizontal_derivative(kxi, std::vector<int>{1, 2}),
                             parse_expression("HessK[x1,x2] * Xi2 + k * Nabla2Xi2[x1,x2]"));
        bad += expr_mismatch(horizontal_derivative(Expression::atom(AtomKind::Xi2), 1), Expression());
        return CheckResult{"symbols.derivative_rules", bad, 0};
    });
    t.push_back([](const VerifyOptions&) {
        double bad = 0;
        for (int m : {2, 4, 6}) {
            const auto r = derive_sphere_rules(m);
            if (r.dd != Rational(4, m) || r.d2 != 2 || r.d_d2_l3 != Rational(-8, 3 * m) ||
                r.d2_n2 != Rational(4, 3 * m) || r.dd_n2 != 0)
                ++bad;
        }
        return CheckResult{"symbols.sphere_rules", bad, 0};
    });
    t.push_back([](const VerifyOptions&) {
        double bad = 0;
        const std::vector<std::pair<int, OperatorSymbols>> cases{
            {2, kdelta_symbols()}, {4, kdelta_symbols()}, {6, kdelta_symbols()}, {4, nc4tori_symbols()}};
        for (const auto& [m, sym] : cases)
            for (const Expression avg = sphere_average(resolvent_b(2, sym), m); const auto& term : avg.terms()) {
                if (!term.coeff.is_real()) ++bad;
                for (const auto& a : term.word)
                    if (a.kind == AtomKind::DXi2 || a.kind == AtomKind::D2Xi2 || a.kind == AtomKind::Nabla2Xi2 ||
                        a.kind == AtomKind::Nabla3L || a.kind == AtomKind::NablaXi2)
                        ++bad;
            }
        return CheckResult{"symbols.cosphere_output", bad, 0};
    });
    return t;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<CheckTask> integral_checks() {
    std::vector<CheckTask> t;
    t.push_back([](const VerifyOptions& o) {
        const auto f = family_integral_dim2({1, 1});
        double e = 0;
        for (double s : {0.5, 2.0, 7.0}) e = std::max(e, rel(eval_function(f, s), quad_r_integral({1, 1}, s, 1)));
        return CheckResult{"integrals.K11_quadrature", e, pick_tol(o, 1e-10)};
    });
    t.push_back([](const VerifyOptions& o) {
        std::mt19937_64 rng(o.seed + 11);
        std::uniform_real_distribution<double> u(0.05, 20);
        double e = 0;
        for (const Expression avg = sphere_average(resolvent_b(2, kdelta_symbols()), 2); const auto& term : avg.terms()) {
            const auto sig = extract_signature(term, 2);
            const auto f = integrate_dim2(sig);
            for (int k = 0; k < 25; ++k) {
                const double s = u(rng), tt = u(rng);
                const double q = 0.5 * to_double(sig.prefactor) * std::pow(s, sig.shift_s) * std::pow(tt, sig.shift_t) *
                                 quad_r_integral(sig.b0_exponents, s, tt);
                e = std::max(e, rel(eval_function(f, s, tt), q));
            }
        }
        return CheckResult{"integrals.dim2_signatures", e, pick_tol(o, 1e-9)};
    });
    t.push_back([](const VerifyOptions& o) {
        std::mt19937_64 rng(o.seed + 12);
        std::uniform_real_distribution<double> u(0.2, 5);
        double e = 0;
        for (int m : {4, 6, 8}) {
            for (const Expression avg = sphere_average(resolvent_b(2, kdelta_symbols()), m); const auto& term : avg.terms()) {
                const auto sig = extract_signature(term, m);
                const auto f = family_integral_dim_m(sig.b0_exponents, m);
                for (int k = 0; k < 5; ++k) {
                    const double s = u(rng), tt = u(rng);
                    e = std::max(e, rel(eval_function(f, s, tt), quad_r_integral_dim_m(sig.b0_exponents, s, tt, m)));
                }
            }
        }
        return CheckResult{"integrals.dim_m_signatures", e, pick_tol(o, 1e-9)};
    });
    t.push_back([](const VerifyOptions& o) {
        const auto r = derive_curvature(2, OperatorKind::KDelta);
        return CheckResult{"integrals.K_limit_at_1", std::abs(eval_function(r.K, 1.0) - 1.0 / 12), pick_tol(o, 1e-8)};
    });
    t.push_back([](const VerifyOptions& o) {
        // r ↦ r/s: K_(p,q)(s) = s^{−w−1} K_(q,p)(1/s)
        std::mt19937_64 rng(o.seed + 13);
        std::uniform_int_distribution<int> pq(1, 4);
        std::uniform_real_distribution<double> u(0.1, 10);
        double e = 0;
        for (int k = 0; k < 10; ++k) {
            const int p = pq(rng), q = pq(rng);
            const double s = u(rng);
            const double lhs = quad_r_integral({p, q}, s, 1);
            const double rhs = std::pow(s, -(p + q - 1)) * quad_r_integral({q, p}, 1 / s, 1);
            e = std::max(e, rel(lhs, rhs));
        }
        return CheckResult{"integrals.scaling_law", e, pick_tol(o, 1e-9)};
    });
    t.push_back([](const VerifyOptions& o) {
        double e = 0;
        for (const std::vector<int>& f : {std::vector<int>{1, 1, 1}, {2, 1, 1}, {3, 1, 1}, {2, 2, 1}, {1, 2, 3}}) {
            const int n = f[0] + f[1] + f[2];
            e = std::max(e, rel(quad_r_integral(f, 1, 1), 1.0 / (n - 1)));
        }
        return CheckResult{"integrals.beta_values", e, pick_tol(o, 1e-10)};
    });
    return t;
}

std::vector<CheckTask> matrix_checks() {
    std::vector<CheckTask> t;
    const std::vector<std::pair<std::string, FamilySpec>> fams{{"K21", {{2, 1}, 0}},
                                                               {"K31", {{3, 1}, 0}},
                                                               {"H311", {{3, 1, 1}, 0}},
                                                               {"H211", {{2, 1, 1}, 0}},
                                                               {"sH221", {{2, 2, 1}, 1}}};
    for (const auto& [name, fam] : fams)
        t.push_back([name, fam](const VerifyOptions& o) {
            double e = 0;
            for (std::uint64_t s = 0; s < 3; ++s) e = std::max(e, matrix_rearrangement_check(6, o.seed + s, fam));
            return CheckResult{"matrix." + name, e, pick_tol(o, 1e-6)};
        });
    t.push_back([](const VerifyOptions& o) {
        const std::vector<double> kappa{0.3, 1.0, 2.5, 4.0};
        std::vector<double> rho(16);
        for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = std::sin(1.0 + static_cast<double>(i));
        double e = matrix_rearrangement_check(kappa, {rho}, {{1, 1}, 0});
        e = std::max(e, matrix_rearrangement_check({1.0}, {{0.7}}, {{1, 1}, 0}));
        return CheckResult{"matrix.diagonal_K11", e, pick_tol(o, 1e-8)};
    });
    t.push_back([](const VerifyOptions& o) {
        QuadratureSpec loose{1e-6, 30}, tight{1e-12, 30};
        const FamilySpec fam{{2, 1, 1}, 0};
        const double el = matrix_rearrangement_check(4, o.seed, fam, loose);
        const double et = matrix_rearrangement_check(4, o.seed, fam, tight);
        return CheckResult{"matrix.refinement", std::max(0.0, et - el - 1e-13), 0};
    });
    return t;
}

std::vector<CheckTask> gauss_bonnet_checks() {
    std::vector<CheckTask> t;
    const std::vector<std::pair<std::string, double>> thetas{
        {"theta0", 0.0}, {"theta1_3", 1.0 / 3}, {"theta_irrational", 1 / std::numbers::sqrt2}};
    for (const auto& [name, th] : thetas)
        t.push_back([name, th](const VerifyOptions& o) {
            const double r = gauss_bonnet_residual(sample_weyl_log(0.1), SkewMatrix::standard(th), 8, 40);
            return CheckResult{"gauss_bonnet." + name, r, pick_tol(o, 1e-6)};
        });
    t.push_back([](const VerifyOptions&) {
        const auto sc = gauss_bonnet_scaling(sample_weyl_log(0.1), SkewMatrix::standard(1 / std::numbers::sqrt2), 8, 40);
        return CheckResult{"gauss_bonnet.scaling", sc.pass ? 0.0 : 1.0, 0};
    });
    t.push_back([](const VerifyOptions&) {
        // truncated series: the residual is dominated by the series tail and must shrink like ε²
        const auto sc = gauss_bonnet_scaling(sample_weyl_log(0.1), SkewMatrix::standard(1 / std::numbers::sqrt2), 1, 40, 0);
        return CheckResult{"gauss_bonnet.scaling_truncated", sc.pass && sc.base > 0 ? 0.0 : 1.0, 0};
    });
    return t;
}

}  // namespace

std::vector<CheckTask> verify_suite(const std::string& suite) {
    if (suite == "algebra") return algebra_checks();
    if (suite == "symbols") return symbol_checks();
    if (suite == "integrals") return integral_checks();
    if (suite == "matrix") return matrix_checks();
    if (suite == "gauss-bonnet") return gauss_bonnet_checks();
    if (suite == "all") {
        std::vector<CheckTask> all;
        for (const char* s : {"algebra", "symbols", "integrals", "matrix", "gauss-bonnet"}) {
            auto part = verify_suite(s);
            all.insert(all.end(), part.begin(), part.end());
        }
        return all;
    }
    throw UsageError("unknown suite '" + suite + "'");
}

std::vector<CheckResult> run_checks(const std::vector<CheckTask>& tasks, const VerifyOptions& opts) {
    std::vector<CheckResult> results(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) results[i] = tasks[i](opts);
    };
    const int n = std::max(1, std::min<int>(opts.jobs, static_cast<int>(tasks.size())));
    std::vector<std::future<void>> pool;
    for (int k = 0; k < n; ++k) pool.push_back(std::async(std::launch::async, worker));
    for (auto& f : pool) f.get();
    return results;
}

std::string format_check(const CheckResult& r) {
    std::ostringstream os;
    os << "CHECK " << r.name << " " << std::setprecision(3) << std::scientific << r.max_err << " " << r.tol << " "
       << (r.pass() ? "PASS" : "FAIL");
    return os.str();
}

}  // namespace modcurv
