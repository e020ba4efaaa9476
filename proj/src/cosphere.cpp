#include "modcurv/cosphere.hpp"

#include "modcurv/errors.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace modcurv {

Rational sphere_moment(const std::vector<int>& alpha, int m) {
    if (m < 1) throw UsageError("sphere dimension must be positive");
    if (static_cast<int>(alpha.size()) > m) throw UsageError("moment exponent longer than dimension");
    int total = 0;
    Rational num(1);
    for (int a : alpha) {
        if (a < 0) throw UsageError("negative moment exponent");
        if (a % 2) return 0;
        for (int j = a - 1; j > 0; j -= 2) num *= j;
        total += a;
    }
    Rational den(1);
    for (int j = 0; j < total; j += 2) den *= m + j;
    return num / den;
}

namespace {

// polynomial in ξ_0..ξ_{m-1}
using XiPoly = std::map<std::vector<int>, Rational>;

void add_to(XiPoly& p, std::vector<int> alpha, const Rational& c) {
    if (c == 0) return;
    p[std::move(alpha)] += c;
}

Rational average(const XiPoly& p, int m) {
    Rational acc(0);
    for (const auto& [alpha, c] : p) acc += c * sphere_moment(alpha, m);
    return acc;
}

std::vector<int> unit(int m, std::initializer_list<int> idx) {
    std::vector<int> a(m, 0);
    for (int i : idx) ++a[i];
    return a;
}

}  // namespace

SphereRules derive_sphere_rules(int m) {
    if (m < 2 || m % 2) throw UsageError("sphere rules need an even dimension ≥ 2");
    SphereRules r;
    r.m = m;

    // ⟨(2ξ_a)(2ξ_b)⟩ = c δ_ab |ξ|²
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            XiPoly p;
            add_to(p, unit(m, {a, b}), 4);
            Rational v = average(p, m);
            if (a == b) {
                if (a == 0) r.dd = v;
                if (v != r.dd) throw std::logic_error("sphere moments not isotropic");
            } else if (v != 0) {
                throw std::logic_error("sphere moments not diagonal");
            }
        }
    r.d2 = 2;  // D²|ξ|² = 2g^{-1} identically

    // algebraic curvature tensor R_abcd = A_ac A_bd − A_ad A_bc, A_ab = 1/(a+b+1)
    auto A = [](int a, int b) { return Rational(1, a + b + 1); };
    auto R = [&](int a, int b, int c, int d) { return A(a, c) * A(b, d) - A(a, d) * A(b, c); };
    Rational S(0);
    for (int p = 0; p < m; ++p)
        for (int k = 0; k < m; ++k) S += R(p, k, p, k);

    // (∇³ℓ)_{ijk} = −⅓ Σ_p ξ_p (R_pikj + R_pjki);  (∇²|ξ|²)_{jk} = ⅔ Σ_{p,i} ξ_p ξ_i R_pjik
    XiPoly t_l3, t_n2, t_ddn2;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                // (2ξ_k)(2δ_ij)(∇³ℓ)_{ijk}
                if (i == j)
                    for (int p = 0; p < m; ++p)
                        add_to(t_l3, unit(m, {k, p}), Rational(4) * Rational(-1, 3) * (R(p, i, k, j) + R(p, j, k, i)));
            }
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
            for (int p = 0; p < m; ++p)
                for (int i = 0; i < m; ++i) {
                    Rational n2 = Rational(2, 3) * R(p, j, i, k);
                    if (j == k) add_to(t_n2, unit(m, {p, i}), 2 * n2);
                    add_to(t_ddn2, unit(m, {j, k, p, i}), 4 * n2);
                }
    r.d_d2_l3 = average(t_l3, m) / S;
    r.d2_n2 = average(t_n2, m) / S;
    r.dd_n2 = average(t_ddn2, m) / S;
    return r;
}

namespace {

struct Work {
    GaussRational coeff;
    std::vector<Atom> nc;
    std::vector<Atom> central;
};

std::vector<std::size_t> find_kind(const std::vector<Atom>& v, AtomKind k) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i].kind == k) out.push_back(i);
    return out;
}

bool same_pair(const std::vector<int>& a, int x, int y) {
    return (a[0] == x && a[1] == y) || (a[0] == y && a[1] == x);
}

void erase_indices(std::vector<Atom>& v, std::vector<std::size_t> idx) {
    std::sort(idx.rbegin(), idx.rend());
    for (auto i : idx) v.erase(v.begin() + static_cast<long>(i));
}

// Wick expansion of ⟨Π_k 2ξ_{a_k}⟩ for an even number of DXi2 factors.
std::vector<Work> pair_vertical(const Work& w, const std::vector<int>& labels, int m) {
    int n = static_cast<int>(labels.size()) / 2;
    Rational c = rational_pow(Rational(2), 2 * n);
    for (int j = 0; j < n; ++j) c /= (m + 2 * j);
    std::vector<Work> out;
    std::function<void(std::vector<int>, std::vector<Atom>)> rec = [&](std::vector<int> rest,
                                                                       std::vector<Atom> acc) {
        if (rest.empty()) {
            Work x = w;
            x.coeff *= GaussRational(c);
            for (int j = 0; j < n; ++j) x.central.push_back({AtomKind::Xi2, {}});
            x.central.insert(x.central.end(), acc.begin(), acc.end());
            out.push_back(std::move(x));
            return;
        }
        int first = rest[0];
        for (std::size_t k = 1; k < rest.size(); ++k) {
            std::vector<int> next;
            for (std::size_t q = 1; q < rest.size(); ++q)
                if (q != k) next.push_back(rest[q]);
            auto a2 = acc;
            a2.push_back({AtomKind::Ginv, {first, rest[k]}});
            rec(next, a2);
        }
    };
    rec(labels, {});
    return out;
}

}  // namespace

Expression sphere_average(const Expression& e, int m) {
    SphereRules rules = derive_sphere_rules(m);
    std::vector<Monomial> out;
    for (const auto& term : e.terms()) {
        Monomial t = canonicalize(term);
        Work w{t.coeff, {}, {}};
        for (const auto& a : t.word) (atom_is_central(a.kind) ? w.central : w.nc).push_back(a);
        for (const auto& a : w.nc)
            if (a.kind == AtomKind::P1 || a.kind == AtomKind::P0)
                throw IncompleteSubstitution("unexpanded lower-order symbol");
        if (!find_kind(w.central, AtomKind::NablaXi2).empty())
            throw IncompleteSubstitution("unevaluated ∇|ξ|² jet");

        int odd = static_cast<int>(find_kind(w.central, AtomKind::DXi2).size() +
                                   find_kind(w.central, AtomKind::Nabla3L).size());
        if (odd % 2) continue;  // odd ξ-degree averages to zero

        bool vanished = false;
        // (D|ξ|²)_k (D²|ξ|²)_ij (∇³ℓ)_ijk
        for (auto l3 = find_kind(w.central, AtomKind::Nabla3L); !l3.empty();
             l3 = find_kind(w.central, AtomKind::Nabla3L)) {
            const auto& s = w.central[l3[0]].slots;
            std::size_t d2 = SIZE_MAX, d1 = SIZE_MAX;
            for (auto i : find_kind(w.central, AtomKind::D2Xi2))
                if (same_pair(w.central[i].slots, s[0], s[1])) d2 = i;
            for (auto i : find_kind(w.central, AtomKind::DXi2))
                if (w.central[i].slots[0] == s[2]) d1 = i;
            if (d2 == SIZE_MAX || d1 == SIZE_MAX)
                throw IncompleteSubstitution("∇³ℓ contraction pattern outside the table");
            erase_indices(w.central, {l3[0], d2, d1});
            w.coeff *= GaussRational(rules.d_d2_l3);
            w.central.push_back({AtomKind::Xi2, {}});
            w.central.push_back({AtomKind::SDelta, {}});
        }
        for (auto n2 = find_kind(w.central, AtomKind::Nabla2Xi2); !n2.empty() && !vanished;
             n2 = find_kind(w.central, AtomKind::Nabla2Xi2)) {
            const auto& s = w.central[n2[0]].slots;
            std::size_t d2 = SIZE_MAX, da = SIZE_MAX, db = SIZE_MAX;
            for (auto i : find_kind(w.central, AtomKind::D2Xi2))
                if (same_pair(w.central[i].slots, s[0], s[1])) d2 = i;
            for (auto i : find_kind(w.central, AtomKind::DXi2)) {
                if (w.central[i].slots[0] == s[0]) da = i;
                if (w.central[i].slots[0] == s[1]) db = i;
            }
            if (d2 != SIZE_MAX) {
                erase_indices(w.central, {n2[0], d2});
                w.coeff *= GaussRational(rules.d2_n2);
                w.central.push_back({AtomKind::Xi2, {}});
                w.central.push_back({AtomKind::SDelta, {}});
            } else if (da != SIZE_MAX && db != SIZE_MAX) {
                if (rules.dd_n2 != 0) throw IncompleteSubstitution("nonzero (D|ξ|²)²∇²|ξ|² average");
                vanished = true;
            } else {
                throw IncompleteSubstitution("∇²|ξ|² contraction pattern outside the table");
            }
        }
        if (vanished) continue;

        for (auto i : find_kind(w.central, AtomKind::D2Xi2)) {
            w.central[i].kind = AtomKind::Ginv;
            w.coeff *= GaussRational(rules.d2);
        }
        std::vector<int> labels;
        auto dxi = find_kind(w.central, AtomKind::DXi2);
        for (auto i : dxi) labels.push_back(w.central[i].slots[0]);
        erase_indices(w.central, dxi);
        std::vector<Work> expanded =
            labels.empty() ? std::vector<Work>{w} : pair_vertical(w, labels, m);

        for (auto& x : expanded) {
            for (const auto& a : x.central)
                if (a.kind == AtomKind::DXi2 || a.kind == AtomKind::D2Xi2 ||
                    a.kind == AtomKind::Nabla2Xi2 || a.kind == AtomKind::Nabla3L)
                    throw IncompleteSubstitution("leftover " + atom_name(a.kind));
            if (!x.coeff.is_real())
                throw PipelineError("cosphere_integrator", "non-real coefficient after averaging");
            Monomial mono{x.coeff, x.nc};
            mono.word.insert(mono.word.end(), x.central.begin(), x.central.end());
            out.push_back(std::move(mono));
        }
    }
    return canonicalize(Expression(std::move(out)));
}

}  // namespace modcurv
