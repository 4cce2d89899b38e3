#include "varjet/jet.hpp"

#include <map>

namespace varjet {

namespace {

// D_i of the determinant polynomial of a root atom's field; cached per call
// site since it only depends on (field, dim, i).
Expression det_total_derivative(const Atom& root, int i, const BundleSpec& bundle) {
    const Expression det = det_polynomial(root.field, root.root_dim);
    ExpressionBuilder b;
    for (int aa = 1; aa <= root.root_dim; ++aa)
        for (int bb = aa; bb <= root.root_dim; ++bb) {
            CompIdx comp;
            comp.push_back(aa);
            comp.push_back(bb);
            const Atom g = Atom::jet(root.field, comp, {});
            const Expression dg = det.partial(g);
            if (dg.is_zero()) continue;
            bundle.check_order(1);
            b.add_product(dg, Monomial::atom(g.with_deriv(i)), Rational(1));
        }
    return b.build();
}

} // namespace

Expression total_derivative(const Expression& e, int i, const BundleSpec& bundle) {
    if (i < 1 || i > bundle.dim())
        throw Error("total derivative direction out of range");

    std::map<Atom, Expression> ddet_cache;
    ExpressionBuilder out;
    for (const auto& [m, c] : e.terms()) {
        for (const auto& [a, exp] : m.factors()) {
            switch (a.kind) {
                case AtomKind::coord:
                    if (a.field == i)
                        out.add_term(m.with_exponent(a, exp - 1), c * Rational(exp));
                    break;
                case AtomKind::jet:
                case AtomKind::aux: {
                    bundle.check_order(a.jet_order() + 1);
                    out.add_term(
                        m.with_exponent(a, exp - 1).times(Monomial::atom(a.with_deriv(i))),
                        c * Rational(exp));
                    break;
                }
                case AtomKind::root: {
                    auto it = ddet_cache.find(a);
                    if (it == ddet_cache.end())
                        it = ddet_cache.emplace(a, det_total_derivative(a, i, bundle)).first;
                    // D_i root^e = (e/2) root^(e-2) * D_i det
                    out.add_product(it->second, m.with_exponent(a, exp - 2),
                                    c * Rational(exp, 2));
                    break;
                }
                case AtomKind::param:
                    break;
            }
        }
    }
    return out.build();
}

Expression total_derivative_multi(const Expression& e, const MultiIdx& I,
                                  const BundleSpec& bundle) {
    Expression r = e;
    for (std::size_t k = 0; k < I.size(); ++k) {
        engine::checkpoint();
        r = total_derivative(r, I[k], bundle);
    }
    return r;
}

Expression prolong_apply(const EvolutionaryField& V, const Expression& e,
                         const BundleSpec& bundle) {
    check_component_layout(bundle, V.comps, "evolutionary field");

    // Distinct jet atoms of e, each resolved to its component ordinal. A
    // square root depends implicitly on every order-0 component of its field.
    std::map<Atom, int> seen;
    const auto& comps = bundle.components();
    const auto note = [&](const Atom& a) {
        if (seen.count(a)) return;
        for (std::size_t k = 0; k < comps.size(); ++k)
            if (comps[k].field == a.field && comps[k].comps == a.comps) {
                seen.emplace(a, static_cast<int>(k));
                return;
            }
    };
    e.for_each_atom([&](const Atom& a, int) {
        if (a.kind == AtomKind::jet) note(a);
        if (a.kind == AtomKind::root)
            for (const ComponentRef& ref : comps)
                if (ref.field == a.field) note(bundle.jet_atom(ref));
    });

    std::map<std::pair<int, MultiIdx>, Expression> dv_cache;
    const std::function<const Expression&(int, const MultiIdx&)> lifted_coeff =
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
        const Expression& prev = lifted_coeff(ordinal, J);
        return dv_cache.emplace(key, total_derivative(prev, last, bundle)).first->second;
    };

    ExpressionBuilder out;
    for (const auto& [atom, ordinal] : seen) {
        engine::checkpoint();
        const Expression d = e.partial(atom);
        if (d.is_zero()) continue;
        out.add_product(lifted_coeff(ordinal, atom.derivs), d);
    }
    return out.build();
}

Density horizontal_differential(const HorizontalForm& omega, const BundleSpec& bundle) {
    if (omega.comps.size() != static_cast<std::size_t>(bundle.dim()))
        throw ModelError("horizontal form must have n components");
    Expression sum;
    for (int i = 1; i <= bundle.dim(); ++i)
        sum += total_derivative(omega.comps[static_cast<std::size_t>(i - 1)], i, bundle);
    return Density{sum};
}

} // namespace varjet
