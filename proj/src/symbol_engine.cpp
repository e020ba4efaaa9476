#include "modcurv/symbol_engine.hpp"

#include "modcurv/errors.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <sstream>

namespace modcurv {

int atom_rank(AtomKind k) {
    switch (k) {
        case AtomKind::GradK:
        case AtomKind::DXi2:
        case AtomKind::NablaXi2: return 1;
        case AtomKind::HessK:
        case AtomKind::D2Xi2:
        case AtomKind::Nabla2Xi2:
        case AtomKind::Ginv: return 2;
        case AtomKind::Nabla3L: return 3;
        default: return 0;
    }
}

bool atom_is_central(AtomKind k) { return static_cast<int>(k) >= static_cast<int>(AtomKind::Xi2); }

bool atom_is_k_function(AtomKind k) {
    return k == AtomKind::B0 || k == AtomKind::K || k == AtomKind::KInv;
}

bool atom_is_contravariant(AtomKind k) {
    return k == AtomKind::DXi2 || k == AtomKind::D2Xi2 || k == AtomKind::Ginv;
}

int atom_homogeneity(AtomKind k) {
    switch (k) {
        case AtomKind::B0: return -2;
        case AtomKind::Xi2:
        case AtomKind::Lambda:
        case AtomKind::NablaXi2:
        case AtomKind::Nabla2Xi2: return 2;
        case AtomKind::DXi2:
        case AtomKind::Nabla3L:
        case AtomKind::P1: return 1;
        default: return 0;
    }
}

std::string atom_name(AtomKind k) {
    switch (k) {
        case AtomKind::B0: return "b0";
        case AtomKind::K: return "k";
        case AtomKind::KInv: return "k^-1";
        case AtomKind::GradK: return "GradK";
        case AtomKind::HessK: return "HessK";
        case AtomKind::P1: return "P1";
        case AtomKind::P0: return "P0";
        case AtomKind::Xi2: return "Xi2";
        case AtomKind::Lambda: return "Lambda";
        case AtomKind::DXi2: return "DXi2";
        case AtomKind::D2Xi2: return "D2Xi2";
        case AtomKind::NablaXi2: return "NablaXi2";
        case AtomKind::Nabla2Xi2: return "Nabla2Xi2";
        case AtomKind::Nabla3L: return "Nabla3L";
        case AtomKind::Ginv: return "Ginv";
        case AtomKind::SDelta: return "SDelta";
    }
    return "?";
}

int homogeneity(const Monomial& m) {
    int h = 0;
    for (const auto& a : m.word) h += atom_homogeneity(a.kind);
    return h;
}

namespace {

bool slot_symmetric(AtomKind k) {
    return k == AtomKind::HessK || k == AtomKind::D2Xi2 || k == AtomKind::Nabla2Xi2 ||
           k == AtomKind::Ginv || k == AtomKind::Nabla3L;
}

std::string label_text(int l) {
    if (l >= kDummyBase) {
        int d = l - kDummyBase;
        if (d < 26) return std::string(1, static_cast<char>('a' + d));
        return "d" + std::to_string(d);
    }
    return "x" + std::to_string(l);
}

std::string atom_text(const Atom& a) {
    std::string s = atom_name(a.kind);
    if (!a.slots.empty()) {
        s += "[";
        for (std::size_t j = 0; j < a.slots.size(); ++j) {
            if (j) s += ",";
            s += label_text(a.slots[j]);
        }
        s += "]";
    }
    return s;
}

std::string word_text(const std::vector<Atom>& word) {
    std::string out;
    for (std::size_t i = 0; i < word.size();) {
        std::size_t j = i;
        while (j < word.size() && word[j].slots.empty() && word[j] == word[i]) ++j;
        int run = static_cast<int>(j - i);
        if (!out.empty()) out += " * ";
        if (run > 1) {
            if (word[i].kind == AtomKind::KInv)
                out += "k^-" + std::to_string(run);
            else
                out += atom_name(word[i].kind) + "^" + std::to_string(run);
            i = j;
        } else {
            out += atom_text(word[i]);
            ++i;
        }
    }
    return out;
}

void validate_slots(const std::vector<Atom>& word) {
    std::map<int, std::vector<bool>> uses;  // label → variance flags
    for (const auto& a : word) {
        if (static_cast<int>(a.slots.size()) != atom_rank(a.kind))
            throw std::logic_error("slot count does not match rank of " + atom_name(a.kind));
        for (int l : a.slots) uses[l].push_back(atom_is_contravariant(a.kind));
    }
    for (const auto& [l, v] : uses) {
        if (v.size() > 2) throw std::logic_error("index label used more than twice");
        if (v.size() == 2 && v[0] == v[1])
            throw std::logic_error("contraction joins two slots of equal variance");
        if (v.size() == 1 && l >= kDummyBase)
            throw std::logic_error("uncontracted dummy label " + label_text(l));
    }
}

// merge commuting K/KInv/B0 runs into b0^p k^a
std::vector<Atom> merge_runs(const std::vector<Atom>& nc) {
    std::vector<Atom> out;
    for (std::size_t i = 0; i < nc.size();) {
        if (!atom_is_k_function(nc[i].kind)) {
            out.push_back(nc[i++]);
            continue;
        }
        int p = 0, a = 0;
        while (i < nc.size() && atom_is_k_function(nc[i].kind)) {
            if (nc[i].kind == AtomKind::B0) ++p;
            if (nc[i].kind == AtomKind::K) ++a;
            if (nc[i].kind == AtomKind::KInv) --a;
            ++i;
        }
        for (int j = 0; j < p; ++j) out.push_back({AtomKind::B0, {}});
        for (int j = 0; j < std::abs(a); ++j) out.push_back({a > 0 ? AtomKind::K : AtomKind::KInv, {}});
    }
    return out;
}

std::vector<std::vector<int>> all_permutations(int n) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<std::vector<int>> out;
    do out.push_back(idx);
    while (std::next_permutation(idx.begin(), idx.end()));
    return out;
}

}  // namespace

Monomial canonicalize(const Monomial& m) {
    validate_slots(m.word);
    std::vector<Atom> nc, central;
    for (const auto& a : m.word) (atom_is_central(a.kind) ? central : nc).push_back(a);
    nc = merge_runs(nc);
    std::stable_sort(central.begin(), central.end(), [](const Atom& x, const Atom& y) {
        return static_cast<int>(x.kind) < static_cast<int>(y.kind);
    });

    // choice points: permutations inside each slotted central kind group, slot swaps
    struct Group {
        std::size_t begin, size;
        std::vector<std::vector<int>> perms;
    };
    std::vector<Group> groups;
    for (std::size_t i = 0; i < central.size();) {
        std::size_t j = i;
        while (j < central.size() && central[j].kind == central[i].kind) ++j;
        if (atom_rank(central[i].kind) > 0 && j - i > 1)
            groups.push_back({i, j - i, all_permutations(static_cast<int>(j - i))});
        i = j;
    }
    std::vector<std::pair<bool, std::size_t>> swappable;  // (is_central, index)
    for (std::size_t i = 0; i < nc.size(); ++i)
        if (slot_symmetric(nc[i].kind)) swappable.push_back({false, i});
    for (std::size_t i = 0; i < central.size(); ++i)
        if (slot_symmetric(central[i].kind)) swappable.push_back({true, i});

    std::map<int, int> counts;
    for (const auto& a : m.word)
        for (int l : a.slots) ++counts[l];

    std::vector<int> best_code;
    std::vector<Atom> best_word;
    bool have_best = false;
    std::vector<std::size_t> radix;
    for (const auto& g : groups) radix.push_back(g.perms.size());
    for (std::size_t k = 0; k < swappable.size(); ++k) radix.push_back(2);
    std::vector<std::size_t> digit(radix.size(), 0);
    while (true) {
        std::vector<Atom> cand_central = central;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            const auto& perm = groups[g].perms[digit[g]];
            for (std::size_t k = 0; k < groups[g].size; ++k)
                cand_central[groups[g].begin + k] = central[groups[g].begin + perm[k]];
        }
        std::vector<Atom> cand_nc = nc;
        for (std::size_t k = 0; k < swappable.size(); ++k) {
            if (!digit[groups.size() + k]) continue;
            auto& atom = swappable[k].first ? cand_central[swappable[k].second] : cand_nc[swappable[k].second];
            std::swap(atom.slots[0], atom.slots[1]);
        }
        std::vector<Atom> word = cand_nc;
        word.insert(word.end(), cand_central.begin(), cand_central.end());
        std::map<int, int> rename;
        std::vector<int> code;
        for (auto& a : word) {
            code.push_back(-1 - static_cast<int>(a.kind));
            for (int& l : a.slots) {
                if (counts[l] == 2) {
                    auto it = rename.find(l);
                    if (it == rename.end())
                        it = rename.emplace(l, kDummyBase + static_cast<int>(rename.size())).first;
                    l = it->second;
                }
                code.push_back(l);
            }
        }
        if (!have_best || code < best_code) {
            have_best = true;
            best_code = std::move(code);
            best_word = std::move(word);
        }
        // advance mixed-radix counter
        std::size_t pos = 0;
        while (pos < digit.size() && ++digit[pos] == radix[pos]) digit[pos++] = 0;
        if (pos == digit.size()) break;
    }
    return {m.coeff, best_word};
}

std::string word_key(const Monomial& canonical) { return word_text(canonical.word); }

Expression canonicalize(const Expression& e) {
    std::map<std::string, Monomial> acc;
    for (const auto& t : e.terms()) {
        if (t.coeff.is_zero()) continue;
        Monomial c = canonicalize(t);
        std::string key = word_key(c);
        auto it = acc.find(key);
        if (it == acc.end())
            acc.emplace(std::move(key), std::move(c));
        else
            it->second.coeff += c.coeff;
    }
    std::vector<Monomial> out;
    for (auto& [k, m] : acc)
        if (!m.coeff.is_zero()) out.push_back(std::move(m));
    return Expression(std::move(out));
}

Expression Expression::atom(AtomKind kind, std::vector<int> slots) {
    return canonicalize(Expression({Monomial{GaussRational(1), {Atom{kind, std::move(slots)}}}}));
}

Expression Expression::constant(const GaussRational& c) {
    if (c.is_zero()) return {};
    return Expression({Monomial{c, {}}});
}

Expression& Expression::operator+=(const Expression& o) {
    std::vector<Monomial> all = terms_;
    all.insert(all.end(), o.terms_.begin(), o.terms_.end());
    *this = canonicalize(Expression(std::move(all)));
    return *this;
}

Expression& Expression::operator-=(const Expression& o) { return *this += o * GaussRational(-1); }

Expression& Expression::operator*=(const GaussRational& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.coeff *= c;
    return *this;
}

namespace {

int max_label(const Monomial& m, bool dummy) {
    int best = dummy ? kDummyBase - 1 : -1;
    for (const auto& a : m.word)
        for (int l : a.slots)
            if ((l >= kDummyBase) == dummy) best = std::max(best, l);
    return best;
}

int max_free_label(const Expression& e) {
    int best = -1;
    for (const auto& t : e.terms()) best = std::max(best, max_label(t, false));
    return best;
}

}  // namespace

Expression operator*(const Expression& a, const Expression& b) {
    std::vector<Monomial> out;
    for (const auto& x : a.terms())
        for (const auto& y : b.terms()) {
            int shift = max_label(x, true) - kDummyBase + 1;
            Monomial m{x.coeff * y.coeff, x.word};
            for (auto atom : y.word) {
                for (int& l : atom.slots)
                    if (l >= kDummyBase) l += shift;
                m.word.push_back(std::move(atom));
            }
            out.push_back(std::move(m));
        }
    return canonicalize(Expression(std::move(out)));
}

bool operator==(const Expression& a, const Expression& b) { return (a - b).is_zero(); }

namespace {

using Fragment = std::vector<std::pair<GaussRational, std::vector<Atom>>>;

Atom A(AtomKind k, std::vector<int> slots = {}) { return Atom{k, std::move(slots)}; }

Fragment vertical_rule(const Atom& a, int n) {
    switch (a.kind) {
        case AtomKind::B0:
            return {{GaussRational(-1),
                     {A(AtomKind::B0), A(AtomKind::K), A(AtomKind::DXi2, {n}), A(AtomKind::B0)}}};
        case AtomKind::Xi2: return {{GaussRational(1), {A(AtomKind::DXi2, {n})}}};
        case AtomKind::DXi2: return {{GaussRational(1), {A(AtomKind::D2Xi2, {a.slots[0], n})}}};
        case AtomKind::D2Xi2:
        case AtomKind::K:
        case AtomKind::KInv:
        case AtomKind::GradK:
        case AtomKind::HessK:
        case AtomKind::Lambda:
        case AtomKind::SDelta:
        case AtomKind::Ginv: return {};
        default: throw RuleTableExhausted("D(" + atom_name(a.kind) + ")");
    }
}

Fragment horizontal_rule(const Atom& a, int n) {
    switch (a.kind) {
        case AtomKind::K: return {{GaussRational(1), {A(AtomKind::GradK, {n})}}};
        case AtomKind::KInv:
            return {{GaussRational(-1), {A(AtomKind::KInv), A(AtomKind::GradK, {n}), A(AtomKind::KInv)}}};
        case AtomKind::GradK: return {{GaussRational(1), {A(AtomKind::HessK, {a.slots[0], n})}}};
        case AtomKind::B0:
            // −b₀ (∇p₂) b₀ with ∇p₂ = (∇k)|ξ|² + k ∇|ξ|²
            return {{GaussRational(-1),
                     {A(AtomKind::B0), A(AtomKind::GradK, {n}), A(AtomKind::Xi2), A(AtomKind::B0)}},
                    {GaussRational(-1),
                     {A(AtomKind::B0), A(AtomKind::K), A(AtomKind::NablaXi2, {n}), A(AtomKind::B0)}}};
        case AtomKind::Xi2: return {{GaussRational(1), {A(AtomKind::NablaXi2, {n})}}};
        case AtomKind::NablaXi2:
            return {{GaussRational(1), {A(AtomKind::Nabla2Xi2, {a.slots[0], n})}}};
        case AtomKind::Lambda:
        case AtomKind::DXi2:
        case AtomKind::D2Xi2:
        case AtomKind::Ginv: return {};
        case AtomKind::HessK: throw RuleTableExhausted("∇(HessK) needs ∇³k");
        default: throw RuleTableExhausted("∇(" + atom_name(a.kind) + ")");
    }
}

template <class Rule>
Expression apply_derivation(const Expression& e, int label, Rule rule) {
    if (label < 0 || label >= kDummyBase) throw UsageError("derivative label out of range");
    std::vector<Monomial> out;
    for (const auto& t : e.terms()) {
        for (const auto& a : t.word)
            for (int l : a.slots)
                if (l == label) throw UsageError("derivative label already in use");
        for (std::size_t i = 0; i < t.word.size(); ++i) {
            for (const auto& [c, frag] : rule(t.word[i], label)) {
                Monomial m{t.coeff * c, {}};
                m.word.insert(m.word.end(), t.word.begin(), t.word.begin() + i);
                m.word.insert(m.word.end(), frag.begin(), frag.end());
                m.word.insert(m.word.end(), t.word.begin() + i + 1, t.word.end());
                out.push_back(std::move(m));
            }
        }
    }
    return canonicalize(Expression(std::move(out)));
}

Expression evaluate_at_point(const Expression& e) {
    std::vector<Monomial> kept;
    for (const auto& t : e.terms()) {
        bool jet = false;
        for (const auto& a : t.word) jet = jet || a.kind == AtomKind::NablaXi2;
        if (!jet) kept.push_back(t);
    }
    return Expression(std::move(kept));
}

}  // namespace

Expression vertical_derivative(const Expression& e, int label) {
    return apply_derivation(e, label, vertical_rule);
}

Expression horizontal_derivative(const Expression& e, const std::vector<int>& labels) {
    Expression cur = e;
    for (int l : labels) cur = apply_derivation(cur, l, horizontal_rule);
    return evaluate_at_point(cur);
}

Expression horizontal_derivative(const Expression& e, int label) {
    return horizontal_derivative(e, std::vector<int>{label});
}

Expression a_j(int j, const Expression& p, const Expression& q) {
    if (j < 0) throw UsageError("a_j: negative order");
    if (j > 2) throw UsageError("a_j: orders above 2 are not implemented");
    if (j == 0) return p * q;
    int f = std::max({max_free_label(p), max_free_label(q), 499}) + 1;
    if (f + 3 >= kDummyBase) throw UsageError("a_j: free labels exhausted");
    const GaussRational minus_i(Rational(0), Rational(-1));
    if (j == 1) return minus_i * (vertical_derivative(p, f) * horizontal_derivative(q, f));
    const GaussRational minus_half(Rational(-1, 2));
    Expression d2p = vertical_derivative(vertical_derivative(p, f), f + 1);
    Expression first = d2p * horizontal_derivative(q, std::vector<int>{f, f + 1});
    Expression d2q = vertical_derivative(vertical_derivative(q, f), f + 1);
    Expression curv = Expression::atom(AtomKind::Nabla3L, {f, f + 1, f + 2});
    Expression second = vertical_derivative(p, f + 2) * d2q * curv;
    return minus_half * (first + second);
}

OperatorSymbols kdelta_symbols() {
    return {parse_expression("k * Xi2 + -1 * Lambda"), Expression(), Expression()};
}

OperatorSymbols nc4tori_symbols() {
    return {parse_expression("k * Xi2 + -1 * Lambda"),
            parse_expression("-1/2i * GradK[a] * DXi2[a]"),
            parse_expression("HessK[a,b] * Ginv[a,b] + GradK[a] * k^-1 * GradK[b] * Ginv[a,b]")};
}

Expression resolvent_b(int kappa, const OperatorSymbols& symbols) {
    if (kappa < 0 || kappa > 2) throw UsageError("resolvent_b: kappa must be 0, 1 or 2");
    if (!(symbols.p2 == kdelta_symbols().p2))
        throw PreconditionError("resolvent_b: p2 must be k*Xi2 - Lambda");
    std::vector<Expression> b{Expression::atom(AtomKind::B0)};
    const Expression* p[3] = {&symbols.p0, &symbols.p1, &symbols.p2};
    for (int k = 1; k <= kappa; ++k) {
        Expression sum;
        for (int nu = 0; nu < k; ++nu)
            for (int j = 0; j <= 2; ++j)
                for (int mu = 0; mu <= 2; ++mu)
                    if (mu - 2 - nu - j == -k && !p[mu]->is_zero()) sum += a_j(j, b[nu], *p[mu]);
        b.push_back(GaussRational(-1) * (sum * b[0]));
    }
    return b[kappa];
}

std::string to_string(const Monomial& m) {
    std::string w = word_text(m.word);
    std::string c = to_string(m.coeff);
    return w.empty() ? c : c + " * " + w;
}

std::string to_string(const Expression& e) {
    if (e.is_zero()) return "0";
    std::string out;
    for (const auto& t : e.terms()) {
        if (!out.empty()) out += " + ";
        out += to_string(t);
    }
    return out;
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\n\r");
    auto e = s.find_last_not_of(" \t\n\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split_on(const std::string& s, const std::string& sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string::npos) break;
        start = pos + sep.size();
    }
    return out;
}

const std::map<std::string, AtomKind>& name_table() {
    static const std::map<std::string, AtomKind> table = {
        {"b0", AtomKind::B0},         {"k", AtomKind::K},
        {"GradK", AtomKind::GradK},   {"HessK", AtomKind::HessK},
        {"P1", AtomKind::P1},         {"P0", AtomKind::P0},
        {"Xi2", AtomKind::Xi2},       {"Lambda", AtomKind::Lambda},
        {"DXi2", AtomKind::DXi2},     {"D2Xi2", AtomKind::D2Xi2},
        {"NablaXi2", AtomKind::NablaXi2}, {"Nabla2Xi2", AtomKind::Nabla2Xi2},
        {"Nabla3L", AtomKind::Nabla3L}, {"Ginv", AtomKind::Ginv},
        {"SDelta", AtomKind::SDelta},
    };
    return table;
}

int parse_label(const std::string& s) {
    if (s.size() == 1 && s[0] >= 'a' && s[0] <= 'z') return kDummyBase + (s[0] - 'a');
    if (s.size() > 1 && (s[0] == 'x' || s[0] == 'd')) {
        int v = std::stoi(s.substr(1));
        return s[0] == 'x' ? v : kDummyBase + v;
    }
    throw UsageError("bad index label '" + s + "'");
}

void parse_factor(const std::string& tok, std::vector<Atom>& word) {
    std::string name = tok, slots, power;
    auto br = tok.find('[');
    auto caret = tok.find('^');
    if (br != std::string::npos) {
        auto close = tok.find(']', br);
        if (close == std::string::npos) throw UsageError("unterminated slot list in '" + tok + "'");
        name = tok.substr(0, br);
        slots = tok.substr(br + 1, close - br - 1);
        if (close + 1 < tok.size()) {
            if (tok[close + 1] != '^') throw UsageError("bad atom '" + tok + "'");
            power = tok.substr(close + 2);
        }
    } else if (caret != std::string::npos) {
        name = tok.substr(0, caret);
        power = tok.substr(caret + 1);
    }
    int n = 1;
    if (!power.empty()) {
        try {
            n = std::stoi(power);
        } catch (const std::logic_error&) {
            throw UsageError("bad power in '" + tok + "'");
        }
    }
    AtomKind kind;
    if (name == "k" && n < 0) {
        kind = AtomKind::KInv;
        n = -n;
    } else {
        auto it = name_table().find(name);
        if (it == name_table().end()) throw UsageError("unknown atom '" + name + "'");
        kind = it->second;
    }
    if (n < 1) throw UsageError("bad power in '" + tok + "'");
    std::vector<int> labels;
    if (!slots.empty())
        for (const auto& l : split_on(slots, ",")) labels.push_back(parse_label(l));
    if (static_cast<int>(labels.size()) != atom_rank(kind))
        throw UsageError("wrong slot count for '" + name + "'");
    for (int k = 0; k < n; ++k) word.push_back({kind, labels});
}

}  // namespace

Expression parse_expression(const std::string& text) {
    std::string body = trim(text);
    if (body.empty()) throw UsageError("empty expression");
    if (body == "0") return {};
    std::vector<Monomial> terms;
    for (const auto& term : split_on(body, " + ")) {
        if (term.empty()) throw UsageError("empty term in expression");
        Monomial m;
        auto toks = split_on(term, " * ");
        std::size_t start = 0;
        char c0 = toks[0].empty() ? ' ' : toks[0][0];
        if (std::isdigit(static_cast<unsigned char>(c0)) || c0 == '-' || c0 == '(') {
            m.coeff = parse_gauss_rational(toks[0]);
            start = 1;
        }
        for (std::size_t k = start; k < toks.size(); ++k) parse_factor(toks[k], m.word);
        try {
            validate_slots(m.word);
        } catch (const std::logic_error& e) {
            throw UsageError(std::string("malformed term: ") + e.what());
        }
        terms.push_back(std::move(m));
    }
    return canonicalize(Expression(std::move(terms)));
}

}  // namespace modcurv
