#include "modcurv/modular.hpp"

#include "modcurv/cosphere.hpp"
#include "modcurv/errors.hpp"

#include <json.hpp>

#include <map>
#include <set>
#include <sstream>

namespace modcurv {

std::string channel_name(Channel c) {
    switch (c) {
        case Channel::Hessian: return "hessian";
        case Channel::GradientPair: return "gradient_pair";
        case Channel::Scalar: return "scalar";
    }
    return "?";
}

std::string operator_name(OperatorKind op) {
    return op == OperatorKind::KDelta ? "kdelta" : "nc4tori";
}

OperatorKind parse_operator(const std::string& name) {
    if (name == "kdelta") return OperatorKind::KDelta;
    if (name == "nc4tori") return OperatorKind::NC4Tori;
    throw UsageError("unknown operator '" + name + "' (expected kdelta or nc4tori)");
}

std::string TermSignature::str() const {
    std::ostringstream os;
    os << to_string(prefactor) << " " << channel_name(channel) << " p=(";
    for (std::size_t i = 0; i < b0_exponents.size(); ++i) os << (i ? "," : "") << b0_exponents[i];
    os << ") k=(";
    for (std::size_t i = 0; i < k_exponents.size(); ++i) os << (i ? "," : "") << k_exponents[i];
    os << ") w=" << r_power << " k_total=" << k_total << " shifts=(" << shift_s << "," << shift_t
       << ")";
    return os.str();
}

TermSignature extract_signature(const Monomial& term, int m) {
    if (!term.coeff.is_real()) throw UnsupportedSignature("non-real coefficient " + to_string(term.coeff));
    TermSignature sig;
    sig.prefactor = term.coeff.re;
    sig.b0_exponents.push_back(0);
    sig.k_exponents.push_back(0);
    std::vector<const Atom*> rhos, ginv;
    int xi2 = 0, sdelta = 0;
    for (const auto& a : term.word) {
        switch (a.kind) {
            case AtomKind::B0: ++sig.b0_exponents.back(); break;
            case AtomKind::K: ++sig.k_exponents.back(); break;
            case AtomKind::KInv: --sig.k_exponents.back(); break;
            case AtomKind::GradK:
            case AtomKind::HessK:
                rhos.push_back(&a);
                sig.rho_factors.push_back(a.kind);
                sig.b0_exponents.push_back(0);
                sig.k_exponents.push_back(0);
                break;
            case AtomKind::Xi2: ++xi2; break;
            case AtomKind::Ginv: ginv.push_back(&a); break;
            case AtomKind::SDelta: ++sdelta; break;
            default:
                throw UnsupportedSignature("atom " + atom_name(a.kind) + " after sphere averaging");
        }
    }
    if (rhos.size() > 2) throw UnsupportedSignature("more than two ρ-factors");

    auto contracts = [](const Atom& g, int x, int y) {
        return (g.slots[0] == x && g.slots[1] == y) || (g.slots[0] == y && g.slots[1] == x);
    };
    if (rhos.empty() && sdelta == 1 && ginv.empty()) {
        sig.channel = Channel::Scalar;
    } else if (rhos.size() == 1 && rhos[0]->kind == AtomKind::HessK && ginv.size() == 1 && sdelta == 0 &&
               contracts(*ginv[0], rhos[0]->slots[0], rhos[0]->slots[1])) {
        sig.channel = Channel::Hessian;
    } else if (rhos.size() == 2 && rhos[0]->kind == AtomKind::GradK && rhos[1]->kind == AtomKind::GradK &&
               ginv.size() == 1 && sdelta == 0 &&
               contracts(*ginv[0], rhos[0]->slots[0], rhos[1]->slots[0])) {
        sig.channel = Channel::GradientPair;
    } else {
        throw UnsupportedSignature("ρ-pattern outside the table in " + to_string(term));
    }

    int total_p = 0, total_a = 0;
    for (int p : sig.b0_exponents) total_p += p;
    for (int a : sig.k_exponents) total_a += a;
    sig.r_power = xi2;
    if (xi2 != total_p - 2)
        throw UnsupportedSignature("r-power " + std::to_string(xi2) + " does not match Σp−2 = " +
                                   std::to_string(total_p - 2));
    if (rhos.size() == 1) sig.shift_s = sig.k_exponents[1];
    if (rhos.size() == 2) {
        sig.shift_s = sig.k_exponents[1] + sig.k_exponents[2];
        sig.shift_t = sig.k_exponents[2];
    }
    sig.k_total = total_a - sig.r_power - m / 2;
    return sig;
}

namespace {

RatFunc sigma_pow(int i, int e) {
    if (i == 0) return RatFunc(1);
    RatFunc r = RatFunc::power(Factor::S, e);
    if (i == 2) r *= RatFunc::power(Factor::T, e);
    return r;
}

using Series = std::vector<RatFunc>;  // truncated power series in ε

Series mul(const Series& a, const Series& b, std::size_t order) {
    Series c(order, RatFunc(0));
    for (std::size_t i = 0; i < a.size() && i < order; ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size() && i + j < order; ++j)
            if (!b[j].is_zero()) c[i + j] += a[i] * b[j];
    }
    return c;
}

void check_exponents(const std::vector<int>& exps) {
    if (exps.empty() || exps.size() > 3) throw UsageError("family needs 1 to 3 exponents");
    for (int n : exps)
        if (n < 0) throw UsageError("negative family exponent");
}

}  // namespace

SymbolicFunction family_integral_dim2(const std::vector<int>& exps) {
    check_exponents(exps);
    int total = 0;
    for (int n : exps) total += n;
    if (total < 2) throw DivergentIntegral("modular_function_engine", "family degree below 2");
    const int w = total - 2;

    // r^w Π(σ_i r + 1)^{−n_i} = Πσ_i^{−n_i} · r^w Π(r + c_i)^{−n_i}, c_i = 1/σ_i
    std::vector<RatFunc> c;
    for (std::size_t i = 0; i < exps.size(); ++i) c.push_back(sigma_pow(static_cast<int>(i), -1));

    RatFunc one_part(0), log_s(0), log_st(0), simple_sum(0);
    for (std::size_t i = 0; i < exps.size(); ++i) {
        const int ni = exps[i];
        if (ni == 0) continue;
        const std::size_t order = static_cast<std::size_t>(ni);
        // Laurent data at r = −c_i + ε
        Series acc(order, RatFunc(0));
        RatFunc minus_c = -c[i];
        for (int k = 0; k <= w && k < ni; ++k) {
            RatFunc term = RatFunc(binomial(w, k));
            term *= minus_c.pow(w - k);
            acc[k] = term;
        }
        for (std::size_t k = 0; k < exps.size(); ++k) {
            if (k == i || exps[k] == 0) continue;
            RatFunc d = c[k] - c[i];
            RatFunc dinv = d.inverse();
            Series f(order, RatFunc(0));
            for (int j = 0; j < ni; ++j) {
                RatFunc v(binomial(-exps[k], j));
                v *= dinv.pow(exps[k] + j);
                f[j] = v;
            }
            acc = mul(acc, f, order);
        }
        // A_{i,j} = acc[n_i − j]
        for (int j = 2; j <= ni; ++j) {
            RatFunc a = acc[ni - j];
            if (a.is_zero()) continue;
            a *= sigma_pow(static_cast<int>(i), j - 1);
            a *= RatFunc(Rational(1, j - 1));
            one_part += a;
        }
        const RatFunc& a1 = acc[ni - 1];
        simple_sum += a1;
        if (i == 1) log_s += a1;
        if (i == 2) log_st += a1;
    }
    if (!simple_sum.is_zero())
        throw DivergentIntegral("modular_function_engine", "logarithmic residues do not cancel");

    RatFunc scale(1);
    for (std::size_t i = 0; i < exps.size(); ++i) scale *= sigma_pow(static_cast<int>(i), -exps[i]);
    return SymbolicFunction(one_part * scale, log_s * scale, log_st * scale);
}

SymbolicFunction family_integral_dim_m(const std::vector<int>& exps, int m) {
    check_exponents(exps);
    if (m < 4 || m % 2) throw UsageError("dimension must be even and at least 4");
    const int n = m / 2 - 2;
    const std::size_t order = static_cast<std::size_t>(n) + 1;
    // (σ − u)^{−k} = σ^{−k} Σ_j C(k+j−1, j) σ^{−j} u^j
    Series acc(order, RatFunc(0));
    acc[0] = RatFunc(1);
    for (std::size_t i = 0; i < exps.size(); ++i) {
        const int k = exps[i];
        if (k == 0) continue;
        Series f(order, RatFunc(0));
        for (std::size_t j = 0; j < order; ++j) {
            RatFunc v(binomial(k + static_cast<int>(j) - 1, static_cast<int>(j)));
            v *= sigma_pow(static_cast<int>(i), -k - static_cast<int>(j));
            f[j] = v;
        }
        acc = mul(acc, f, order);
    }
    RatFunc r = acc[n];
    r *= RatFunc(factorial(n));
    return SymbolicFunction(r);
}

namespace {

RatFunc shift_factor(const TermSignature& sig) {
    return RatFunc::power(Factor::S, sig.shift_s) * RatFunc::power(Factor::T, sig.shift_t) *
           RatFunc(sig.prefactor / 2);
}

}  // namespace

SymbolicFunction integrate_dim2(const TermSignature& sig) {
    return family_integral_dim2(sig.b0_exponents) * shift_factor(sig);
}

SymbolicFunction integrate_dim_m(const TermSignature& sig, int m) {
    return family_integral_dim_m(sig.b0_exponents, m) * shift_factor(sig);
}

namespace {

Rational constant_value(const SymbolicFunction& f, const std::string& what) {
    if (f.has_logs() || f.uses_t() || !f.part(LogBasis::ONE).num().is_constant())
        throw PipelineError("modular_function_engine", what + " is not a constant");
    for (int e : f.part(LogBasis::ONE).den())
        if (e != 0) throw PipelineError("modular_function_engine", what + " is not a constant");
    return f.part(LogBasis::ONE).num().constant_term();
}

}  // namespace

CurvatureReport derive_curvature(int m, OperatorKind op) {
    if (m < 2 || m % 2) throw UsageError("dimension must be an even integer ≥ 2");
    if (op == OperatorKind::NC4Tori && m != 4) throw UsageError("nc4tori requires --dim 4");

    CurvatureReport rep;
    rep.dim = m;
    rep.op = op;
    rep.normalization.volume_coefficient = Rational(2) / factorial(m / 2 - 1);
    rep.normalization.two_pi_power = -m;
    rep.normalization.half_included = true;

    Expression b2 = resolvent_b(2, op == OperatorKind::KDelta ? kdelta_symbols() : nc4tori_symbols());
    Expression avg = sphere_average(b2, m);
    rep.term_count = avg.terms().size();

    std::map<Channel, std::set<int>> powers;
    for (const auto& term : avg.terms()) {
        TermSignature sig = extract_signature(term, m);
        SymbolicFunction f = m == 2 ? integrate_dim2(sig) : integrate_dim_m(sig, m);
        powers[sig.channel].insert(sig.k_total);
        switch (sig.channel) {
            case Channel::Hessian: rep.K += f; break;
            case Channel::GradientPair: rep.G += f; break;
            case Channel::Scalar:
                rep.c_scalar += constant_value(f, "scalar channel");
                rep.scalar_term_coefficient += sig.prefactor;
                break;
        }
    }
    const std::map<Channel, int> expected{{Channel::Hessian, -m / 2},
                                          {Channel::GradientPair, -m / 2 - 1},
                                          {Channel::Scalar, -m / 2 + 1}};
    for (const auto& [ch, set] : powers) {
        if (set.size() != 1 || *set.begin() != expected.at(ch))
            throw PipelineError("modular_function_engine",
                                "inconsistent k-prefactor power in channel " + channel_name(ch));
    }
    rep.k_powers = {expected.at(Channel::Hessian), expected.at(Channel::GradientPair),
                    expected.at(Channel::Scalar)};
    if (rep.scalar_term_coefficient != 0) rep.F1 = rep.c_scalar / rep.scalar_term_coefficient;
    rep.c_scalar_normalized =
        rep.c_scalar * rep.normalization.volume_coefficient * rational_pow(Rational(2), -m);

    if (op == OperatorKind::NC4Tori) {
        rep.notes.push_back(
            "reference sign of K is ambiguous: one derivation gives K(s) = -1/(4s), another states "
            "K(s) = 1/(4s); the K reported here is the pipeline value");
        rep.notes.push_back(
            "hand-listed lower-order pieces differ from the recursion: -b1 p1 b0 contributes "
            "-1/4 b0 (Dk) b0 (Dk) b0 (D|xi|^2)^2 (reference +1/4) and i Db0 (D p1) b0 contributes "
            "-1/2 b0^2 k (D^2 k) b0 (D|xi|^2)^2 (reference +1/2)");
    }
    return rep;
}

std::string report_text(const CurvatureReport& r) {
    std::ostringstream os;
    os << "dim: " << r.dim << "\n";
    os << "operator: " << operator_name(r.op) << "\n";
    os << "normalization: Vol(S^" << r.dim - 1 << ") = " << to_string(r.normalization.volume_coefficient)
       << "*pi^" << r.dim / 2 << ", (2*pi)^" << r.normalization.two_pi_power
       << ", factor 1/2 from r -> r^2 included in K and G\n";
    os << "k_powers: hessian " << r.k_powers.hessian << ", gradient_pair " << r.k_powers.gradient_pair
       << ", scalar " << r.k_powers.scalar << "\n";
    os << "K: " << r.K.str() << "\n";
    os << "G: " << r.G.str() << "\n";
    os << "c_scalar: " << to_string(r.c_scalar) << "\n";
    os << "F(1): " << to_string(r.F1) << "\n";
    os << "c_scalar_normalized: " << to_string(r.c_scalar_normalized) << "*pi^-" << r.dim / 2 << "\n";
    for (const auto& n : r.notes) os << "note: " << n << "\n";
    return os.str();
}

std::string report_json(const CurvatureReport& r) {
    nlohmann::ordered_json j;
    j["dim"] = r.dim;
    j["operator"] = operator_name(r.op);
    j["normalization"] = {
        {"sphere_volume", to_string(r.normalization.volume_coefficient) + "*pi^" + std::to_string(r.dim / 2)},
        {"two_pi_power", r.normalization.two_pi_power},
        {"half_included", r.normalization.half_included}};
    j["k_powers"] = {{"hessian", r.k_powers.hessian},
                     {"gradient_pair", r.k_powers.gradient_pair},
                     {"scalar", r.k_powers.scalar}};
    j["K"] = r.K.str();
    j["G"] = r.G.str();
    j["c_scalar"] = to_string(r.c_scalar);
    j["F1"] = to_string(r.F1);
    j["c_scalar_normalized"] = to_string(r.c_scalar_normalized) + "*pi^-" + std::to_string(r.dim / 2);
    j["notes"] = r.notes;
    return j.dump(2) + "\n";
}

}  // namespace modcurv
