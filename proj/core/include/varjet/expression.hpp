#pragma once

#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "varjet/atom.hpp"
#include "varjet/engine.hpp"
#include "varjet/rational.hpp"

namespace varjet {

/// Product of atom powers. Exponents are nonzero integers; negative exponents
/// are Laurent factors. Factors stay sorted by the canonical atom order.
class Monomial {
public:
    Monomial() = default;

    static Monomial unit() { return {}; }
    static Monomial atom(const Atom& a, int exp = 1);

    const std::vector<std::pair<Atom, int>>& factors() const { return factors_; }
    bool empty() const { return factors_.empty(); }

    int exponent_of(const Atom& a) const;
    bool contains(const Atom& a) const { return exponent_of(a) != 0; }

    Monomial times(const Monomial& o) const;
    Monomial with_exponent(const Atom& a, int exp) const;  // exp 0 removes
    Monomial inverse() const;

    /// Componentwise quotient requiring non-negative result exponents.
    std::optional<Monomial> divide_nonneg(const Monomial& d) const;

    int jet_order() const;
    int total_jet_degree() const;  // sum of jet-atom exponents

    friend bool operator==(const Monomial& a, const Monomial& b) {
        return a.factors_ == b.factors_;
    }

    /// Dense-union lexicographic order over the shared atom axis; total and
    /// compatible with multiplication, so leading terms behave under products.
    static int compare(const Monomial& a, const Monomial& b);

private:
    std::vector<std::pair<Atom, int>> factors_;
};

struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        return Monomial::compare(a, b) < 0;
    }
};

/// Canonical exact symbolic expression: a finite sum of Rational-weighted
/// monomials subject to the single relation root(g)^2 = det-polynomial(g).
/// Values are immutable; every operation returns a fresh normal form.
class Expression {
public:
    using TermMap = std::map<Monomial, Rational, MonomialLess>;

    Expression() = default;

    static Expression zero() { return {}; }
    static Expression constant(const Rational& c);
    static Expression from_atom(const Atom& a, int exp = 1);
    static Expression from_monomial(const Monomial& m, const Rational& c);

    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    friend Expression operator+(const Expression& a, const Expression& b);
    friend Expression operator-(const Expression& a, const Expression& b);
    friend Expression operator*(const Expression& a, const Expression& b);
    friend Expression operator-(const Expression& a);
    Expression& operator+=(const Expression& o) { return *this = *this + o; }
    Expression& operator-=(const Expression& o) { return *this = *this - o; }
    Expression& operator*=(const Expression& o) { return *this = *this * o; }

    Expression scaled(const Rational& c) const;
    Expression pow(int e) const;  // e >= 0, or any e when a single monomial

    /// Structural equality; canonical forms make it coincide with equality of
    /// the represented functions.
    friend bool operator==(const Expression& a, const Expression& b) {
        return a.terms_ == b.terms_;
    }

    /// Formal partial derivative treating every distinct jet/aux atom as an
    /// independent variable; square roots differentiate implicitly through
    /// their determinant polynomial. Rejects root and parameter atoms.
    Expression partial(const Atom& a) const;

    /// Floating-point evaluation. Every atom of the expression must be
    /// assigned; root atoms must match sqrt(det) of their assigned components
    /// within 1e-9.
    double evaluate(const std::map<Atom, double>& assignment) const;

    /// Multiplies each monomial by t^(total jet degree); the fiber-scaling
    /// substitution y -> t*y. Rejects root atoms, aux atoms and negative jet
    /// exponents.
    Expression scale_jets_with_param(int param_id) const;

    /// Exact integral over the parameter from 0 to 1; the parameter must
    /// appear polynomially and is eliminated.
    Expression integrate_param_unit(int param_id) const;

    int jet_order() const;
    bool has_kind(AtomKind k) const;
    bool has_aux(AuxFamily fam) const;
    bool has_negative_jet_exponent() const;

    void for_each_atom(const std::function<void(const Atom&, int)>& fn) const;

    /// Largest term under the monomial order. Expression must be nonzero.
    const std::pair<const Monomial, Rational>& leading() const { return *terms_.rbegin(); }

private:
    friend class NormalForm;
    friend class ExpressionBuilder;
    explicit Expression(TermMap t) : terms_(std::move(t)) {}

    TermMap terms_;
};

/// Accumulates terms without intermediate normalization; build() produces the
/// canonical Expression once. Use in loops that would otherwise renormalize
/// per addition.
class ExpressionBuilder {
public:
    void add_term(const Monomial& m, const Rational& c);
    void add(const Expression& e, const Rational& scale = Rational(1));
    /// Adds e * m * c.
    void add_product(const Expression& e, const Monomial& m, const Rational& c);
    /// Adds a * b * c.
    void add_product(const Expression& a, const Expression& b,
                     const Rational& c = Rational(1));
    Expression build();

private:
    Expression::TermMap terms_;
};

/// Determinant of a symmetric2 field's component matrix, expanded into jet
/// atoms of the independent components a <= b.
Expression det_polynomial(int field, int dim);

/// Adjugate entry (a,b) of the component matrix, same indexing convention.
Expression adjugate_entry(int field, int dim, int a, int b);

/// Exact division: returns q with a = q*b, or nullopt when b does not divide
/// a in the Laurent ring. b must be nonzero and root-free.
std::optional<Expression> exact_divide(const Expression& a, const Expression& b);

} // namespace varjet
