#pragma once

#include "modcurv/rational.hpp"

#include <string>
#include <vector>

namespace modcurv {

// Noncentral kinds first, then central kinds in their canonical right-end order.
enum class AtomKind : int {
    B0,
    K,
    KInv,
    GradK,
    HessK,
    P1,
    P0,
    Xi2,
    Lambda,
    DXi2,
    D2Xi2,
    NablaXi2,  // ∇|ξ|² before evaluation at the base point
    Nabla2Xi2,
    Nabla3L,
    Ginv,
    SDelta,
};

int atom_rank(AtomKind k);
bool atom_is_central(AtomKind k);
// K, KInv and B0 commute with each other (all functions of k).
bool atom_is_k_function(AtomKind k);
bool atom_is_contravariant(AtomKind k);
// ξ-homogeneity with λ counted as degree 2
int atom_homogeneity(AtomKind k);
std::string atom_name(AtomKind k);

// Free index labels are < kDummyBase; contracted (dummy) labels are ≥ kDummyBase.
constexpr int kDummyBase = 1000;

struct Atom {
    AtomKind kind;
    std::vector<int> slots;

    friend bool operator==(const Atom&, const Atom&) = default;
};

struct Monomial {
    GaussRational coeff{1};
    std::vector<Atom> word;
};

int homogeneity(const Monomial& m);

class Expression {
public:
    Expression() = default;
    explicit Expression(std::vector<Monomial> terms) : terms_(std::move(terms)) {}
    static Expression atom(AtomKind kind, std::vector<int> slots = {});
    static Expression constant(const GaussRational& c);

    const std::vector<Monomial>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Expression& operator+=(const Expression& o);
    Expression& operator-=(const Expression& o);
    Expression& operator*=(const GaussRational& c);
    friend Expression operator+(Expression a, const Expression& b) { return a += b; }
    friend Expression operator-(Expression a, const Expression& b) { return a -= b; }
    friend Expression operator*(Expression a, const GaussRational& c) { return a *= c; }
    friend Expression operator*(const GaussRational& c, Expression a) { return a *= c; }
    // noncommutative product; shared free labels become contractions
    friend Expression operator*(const Expression& a, const Expression& b);
    // canonical equality
    friend bool operator==(const Expression& a, const Expression& b);

private:
    std::vector<Monomial> terms_;
};

Expression canonicalize(const Expression& e);
Monomial canonicalize(const Monomial& m);
// Word with canonical labels and no coefficient; equal keys ⇔ like terms.
std::string word_key(const Monomial& canonical);

// D with the new contravariant slot labelled `label` (< kDummyBase).
Expression vertical_derivative(const Expression& e, int label);
// ∇ applied once per label (jets keep ∇|ξ|²), then evaluated at the base point.
Expression horizontal_derivative(const Expression& e, const std::vector<int>& labels);
Expression horizontal_derivative(const Expression& e, int label);

Expression a_j(int j, const Expression& p, const Expression& q);

struct OperatorSymbols {
    Expression p2;
    Expression p1;
    Expression p0;
};

OperatorSymbols kdelta_symbols();
OperatorSymbols nc4tori_symbols();

// kappa = 0 returns b₀; 1 and 2 run the parametrix recursion.
Expression resolvent_b(int kappa, const OperatorSymbols& symbols);

// Grammar: terms joined by " + "; a term is `coeff * atom[slots] * ...`.
std::string to_string(const Expression& e);
std::string to_string(const Monomial& m);
Expression parse_expression(const std::string& text);

}  // namespace modcurv
