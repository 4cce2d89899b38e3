#include "varjet/variational.hpp"

#include <algorithm>
#include <set>

#include "varjet/parser.hpp"

namespace varjet {

namespace detail {

Expression euler_component(const Expression& e, const Atom& base,
                           const BundleSpec& bundle) {
    std::set<MultiIdx> indices;
    e.for_each_atom([&](const Atom& a, int) {
        if (a.kind == base.kind && a.field == base.field &&
            a.aux_family == base.aux_family && a.comps == base.comps)
            indices.insert(a.derivs);
        // a square root of the field depends implicitly on every order-0 component
        if (base.kind == AtomKind::jet && a.kind == AtomKind::root &&
            a.field == base.field)
            indices.insert(MultiIdx{});
    });

    Expression acc;
    for (const MultiIdx& J : indices) {
        engine::checkpoint();
        Atom v = base;
        v.derivs = J;
        Expression d = e.partial(v);
        if (d.is_zero()) continue;
        d = total_derivative_multi(d, J, bundle);
        acc += (J.size() % 2 == 0) ? d : -d;
    }
    return acc;
}

namespace {

// Rank that drives the integration-by-parts schedules: longer multi-indices
// first, then descending-lexicographic on the sorted index list.
bool multiidx_rank_less(const MultiIdx& a, const MultiIdx& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    // lists are sorted ascending; compare largest entries first
    for (std::size_t k = a.size(); k-- > 0;)
        if (a[k] != b[k]) return a[k] < b[k];
    return false;
}

bool jet_rank_less(const Atom& a, const Atom& b) {
    if (a.derivs.size() != b.derivs.size()) return a.derivs.size() < b.derivs.size();
    if (multiidx_rank_less(a.derivs, b.derivs)) return true;
    if (multiidx_rank_less(b.derivs, a.derivs)) return false;
    if (a.field != b.field) return a.field < b.field;
    if (!(a.comps == b.comps)) return a.comps < b.comps;
    return false;
}

// Monomial-wise antiderivative with respect to an atom. Understands the
// square-root coupling when the variable is the single component of a
// one-dimensional symmetric field. Returns nullopt on logarithmic cases.
std::optional<Expression> integrate_atom(const Expression& e, const Atom& v) {
    ExpressionBuilder out;
    for (const auto& [m, c] : e.terms()) {
        const int e0 = m.exponent_of(v);
        bool coupled = false;
        int root_exp = 0;
        Atom root;
        if (v.kind == AtomKind::jet && v.derivs.empty()) {
            for (const auto& [a, ex] : m.factors()) {
                if (a.kind == AtomKind::root && a.field == v.field) {
                    if (a.root_dim >= 2) return std::nullopt;  // non-elementary
                    coupled = true;
                    root = a;
                    root_exp = ex;
                }
            }
        }
        if (coupled) {
            // integrand g^e0 * root^w = g^(e0 + w/2); antiderivative keeps the
            // root power and raises the plain exponent.
            const Rational denom = Rational(e0 + 1) + Rational(root_exp, 2);
            if (denom.is_zero()) return std::nullopt;
            out.add_term(m.with_exponent(v, e0 + 1), c / denom);
        } else {
            if (e0 == -1) return std::nullopt;
            out.add_term(m.with_exponent(v, e0 + 1), c / Rational(e0 + 1));
        }
    }
    return out.build();
}

} // namespace

std::pair<HorizontalForm, Expression> extract_divergence(const Expression& input,
                                                         const BundleSpec& bundle) {
    HorizontalForm omega = zero_horizontal_form(bundle);
    Expression e = input;
    if (e.has_kind(AtomKind::aux))
        throw Error("divergence extraction expects a formal-free expression");

    const int max_rounds = 2000;
    for (int round = 0; round < max_rounds && !e.is_zero(); ++round) {
        engine::checkpoint();

        // Top jet atom of e.
        std::optional<Atom> top;
        e.for_each_atom([&](const Atom& a, int) {
            if (a.kind != AtomKind::jet) return;
            if (!top || jet_rank_less(*top, a)) top = a;
        });

        if (!top || top->derivs.empty()) {
            if (top) return {omega, e};  // order-0 jet dependence left: not exact
            // Pure base function: integrate along x^1.
            auto g = integrate_atom(e, Atom::coord(1));
            if (!g) return {omega, e};
            omega.comps[0] += *g;
            e = e - total_derivative(*g, 1, bundle);
            if (!e.is_zero()) return {omega, e};
            break;
        }

        const Atom A = *top;
        const Expression c = e.partial(A);
        if (c.is_zero() || !c.partial(A).is_zero()) return {omega, e};  // nonlinear top

        // Candidate peel directions, largest base index first; prefer one whose
        // boundary term provably lowers the top atom.
        std::vector<int> candidates;
        for (std::size_t k = A.derivs.size(); k-- > 0;) {
            const int i = A.derivs[k];
            if (std::find(candidates.begin(), candidates.end(), i) == candidates.end())
                candidates.push_back(i);
        }

        struct Option {
            int dir;
            Expression g;
            Expression d;
            bool progress;
        };
        std::optional<Option> chosen;
        for (int i : candidates) {
            const Atom Aprime = A.without_deriv(i);
            auto g = integrate_atom(c, Aprime);
            if (!g) continue;
            Expression d = total_derivative(*g, i, bundle);
            bool progress = true;
            d.for_each_atom([&](const Atom& a, int) {
                if (a.kind == AtomKind::jet && jet_rank_less(A, a)) progress = false;
            });
            if (progress) {
                chosen = Option{i, *g, d, true};
                break;
            }
            if (!chosen) chosen = Option{i, *g, d, false};
        }
        if (!chosen) return {omega, e};

        omega.comps[static_cast<std::size_t>(chosen->dir - 1)] += chosen->g;
        e = e - chosen->d;
    }
    return {omega, e};
}

PeelResult peel_formal(const Expression& input, AuxFamily family, int slot_count,
                       const BundleSpec& bundle) {
    const auto is_family = [family](const Atom& a) {
        return a.kind == AtomKind::aux &&
               a.aux_family == static_cast<std::uint8_t>(family);
    };

    // Linearity in the formal family.
    for (const auto& [m, c] : input.terms()) {
        int degree = 0;
        for (const auto& [a, exp] : m.factors())
            if (is_family(a)) degree += exp < 0 ? 2 : exp;
        if (degree > 1)
            throw InvariantError("formal peel requires linearity in the formal family");
    }

    HorizontalForm boundary = zero_horizontal_form(bundle);
    Expression e = input;
    while (true) {
        engine::checkpoint();
        std::optional<Atom> pick;
        e.for_each_atom([&](const Atom& a, int) {
            if (!is_family(a) || a.derivs.empty()) return;
            if (!pick || multiidx_rank_less(pick->derivs, a.derivs) ||
                (!multiidx_rank_less(a.derivs, pick->derivs) && pick->field < a.field))
                pick = a;
        });
        if (!pick) break;

        const Atom W = *pick;
        const Expression c = e.partial(W);
        const int i = W.derivs.back();
        const Atom Wprime = W.without_deriv(i);
        const Expression g = c * Expression::from_atom(Wprime);
        boundary.comps[static_cast<std::size_t>(i - 1)] += g;
        e = e - total_derivative(g, i, bundle);
    }

    PeelResult r{std::vector<Expression>(static_cast<std::size_t>(slot_count)),
                 std::move(boundary)};
    for (const auto& [m, c] : e.terms()) {
        bool placed = false;
        for (const auto& [a, exp] : m.factors()) {
            if (is_family(a)) {
                if (!a.derivs.empty() || exp != 1)
                    throw InvariantError("formal peel left a derivative atom behind");
                if (a.field < 0 || a.field >= slot_count)
                    throw InvariantError("formal slot out of range");
                r.slot_coeffs[static_cast<std::size_t>(a.field)] +=
                    Expression::from_monomial(m.with_exponent(a, 0), c);
                placed = true;
                break;
            }
        }
        if (!placed)
            throw InvariantError("formal peel left a formal-free term behind");
    }
    return r;
}

Expression substitute_fiber_formal(const Expression& e, const EvolutionaryField& V,
                                   const BundleSpec& bundle) {
    check_component_layout(bundle, V.comps, "evolutionary field");
    std::map<std::pair<int, MultiIdx>, Expression> dv_cache;
    const std::function<const Expression&(int, const MultiIdx&)> lifted =
        [&](int ordinal, const MultiIdx& I) -> const Expression& {
        auto key = std::make_pair(ordinal, I);
        auto it = dv_cache.find(key);
        if (it != dv_cache.end()) return it->second;
        if (I.empty())
            return dv_cache.emplace(key, V.comps[static_cast<std::size_t>(ordinal)])
                .first->second;
        MultiIdx J = I;
        const int last = I.back();
        J.erase_one(last);
        return dv_cache.emplace(key, total_derivative(lifted(ordinal, J), last, bundle))
            .first->second;
    };

    ExpressionBuilder out;
    for (const auto& [m, c] : e.terms()) {
        std::optional<Atom> formal;
        for (const auto& [a, exp] : m.factors()) {
            if (a.kind == AtomKind::aux &&
                a.aux_family == static_cast<std::uint8_t>(AuxFamily::fiber)) {
                if (exp != 1)
                    throw InvariantError("fiber-formal substitution expects linearity");
                formal = a;
            }
        }
        if (!formal) {
            out.add_term(m, c);
            continue;
        }
        out.add_product(lifted(formal->field, formal->derivs),
                        m.with_exponent(*formal, 0), c);
    }
    return out.build();
}

} // namespace detail

SourceEquation euler_lagrange(const Density& L, const BundleSpec& bundle) {
    SourceEquation T;
    for (const ComponentRef& ref : bundle.components()) {
        engine::checkpoint();
        T.comps.push_back(detail::euler_component(L.coeff, bundle.jet_atom(ref), bundle));
    }
    return T;
}

std::vector<Expression> euler_operator_aux(const Density& P, const BundleSpec& bundle) {
    std::vector<Expression> out;
    for (int i = 1; i <= bundle.dim(); ++i) {
        engine::checkpoint();
        out.push_back(
            detail::euler_component(P.coeff, Atom::aux(AuxFamily::base, i), bundle));
    }
    return out;
}

FirstVariationResult first_variation(const Density& L, const EvolutionaryField& V,
                                     const BundleSpec& bundle) {
    check_component_layout(bundle, V.comps, "evolutionary field");

    // Variation against a formal multiplier field W.
    const auto& comps = bundle.components();
    ExpressionBuilder pb;
    for (std::size_t k = 0; k < comps.size(); ++k) {
        std::set<MultiIdx> indices;
        L.coeff.for_each_atom([&](const Atom& a, int) {
            if (a.kind == AtomKind::jet && a.field == comps[k].field &&
                a.comps == comps[k].comps)
                indices.insert(a.derivs);
            if (a.kind == AtomKind::root && a.field == comps[k].field)
                indices.insert(MultiIdx{});
        });
        for (const MultiIdx& J : indices) {
            const Expression d = L.coeff.partial(bundle.jet_atom(comps[k], J));
            if (d.is_zero()) continue;
            pb.add_product(
                d, Monomial::atom(Atom::aux(AuxFamily::fiber, static_cast<int>(k), J)),
                Rational(1));
        }
    }
    const Expression P = pb.build();

    detail::PeelResult peeled =
        detail::peel_formal(P, AuxFamily::fiber, bundle.total_components(), bundle);

    HorizontalForm current = zero_horizontal_form(bundle);
    for (int i = 0; i < bundle.dim(); ++i)
        current.comps[static_cast<std::size_t>(i)] = detail::substitute_fiber_formal(
            peeled.boundary.comps[static_cast<std::size_t>(i)], V, bundle);

    return FirstVariationResult{source_apply(euler_lagrange(L, bundle), V, bundle),
                                std::move(current)};
}

Density tonti_lagrangian(const SourceEquation& T, const BundleSpec& bundle) {
    check_component_layout(bundle, T.comps, "source equation");
    constexpr int param = 0;
    ExpressionBuilder acc;
    const auto& comps = bundle.components();
    for (std::size_t k = 0; k < comps.size(); ++k) {
        if (T.comps[k].has_kind(AtomKind::root) || T.comps[k].has_negative_jet_exponent())
            throw Error(
                "Tonti reconstruction needs polynomial fiber dependence "
                "(no square roots or negative jet powers)");
        const Expression scaled = T.comps[k].scale_jets_with_param(param);
        acc.add_product(scaled, Monomial::atom(bundle.jet_atom(comps[k])), Rational(1));
    }
    return Density{acc.build().integrate_param_unit(param)};
}

bool is_locally_variational(const SourceEquation& T, const BundleSpec& bundle) {
    const SourceEquation back = euler_lagrange(tonti_lagrangian(T, bundle), bundle);
    for (std::size_t k = 0; k < T.comps.size(); ++k)
        if (!(back.comps[k] - T.comps[k]).is_zero()) return false;
    return true;
}

bool is_null_lagrangian(const Density& L, const BundleSpec& bundle) {
    for (const Expression& t : euler_lagrange(L, bundle).comps)
        if (!t.is_zero()) return false;
    return true;
}

Density source_apply(const SourceEquation& T, const EvolutionaryField& V,
                     const BundleSpec& bundle) {
    check_component_layout(bundle, T.comps, "source equation");
    check_component_layout(bundle, V.comps, "evolutionary field");
    ExpressionBuilder acc;
    for (std::size_t k = 0; k < T.comps.size(); ++k)
        acc.add_product(T.comps[k], V.comps[k]);
    return Density{acc.build()};
}

SourceEquation lie_derivative_source(const EvolutionaryField& V, const SourceEquation& T,
                                     const BundleSpec& bundle) {
    return euler_lagrange(source_apply(T, V, bundle), bundle);
}

bool is_symmetry(const EvolutionaryField& V, const SourceEquation& T,
                 const BundleSpec& bundle) {
    for (const Expression& t : lie_derivative_source(V, T, bundle).comps)
        if (!t.is_zero()) return false;
    return true;
}

HorizontalForm conserved_current(const EvolutionaryField& V, const SourceEquation& T,
                                 const BundleSpec& bundle) {
    const Density tv = source_apply(T, V, bundle);
    auto [omega, residual] = detail::extract_divergence(tv.coeff, bundle);
    if (!residual.is_zero())
        throw ExtractionError(
            "conserved-current extraction failed; T(V) is not exhibited as a total "
            "divergence (non-symmetry or order bound too low)",
            to_string(residual, bundle));
    const Density back = horizontal_differential(omega, bundle);
    if (!(back.coeff - tv.coeff).is_zero())
        throw InvariantError("extracted current fails d_h(omega) = T(V)");
    return omega;
}

} // namespace varjet
