#include "varjet/natural.hpp"

#include "varjet/parser.hpp"

namespace varjet {

namespace {

Atom aux_d(int i, MultiIdx derivs = {}) { return Atom::aux(AuxFamily::base, i, derivs); }

Atom sym_atom(int field, int a, int b, MultiIdx derivs = {}) {
    CompIdx c;
    c.push_back(std::min(a, b));
    c.push_back(std::max(a, b));
    return Atom::jet(field, c, derivs);
}

} // namespace

EvolutionaryField delta_lift(const BundleSpec& bundle) {
    const int n = bundle.dim();
    EvolutionaryField lift;
    for (const ComponentRef& ref : bundle.components()) {
        ExpressionBuilder acc;
        switch (bundle.field(ref.field).kind) {
            case FieldKind::scalar:
                // Delta_u = -D^k u_{;k}
                for (int k = 1; k <= n; ++k) {
                    Monomial m = Monomial::atom(aux_d(k));
                    m = m.times(Monomial::atom(Atom::jet(ref.field, {}, MultiIdx{k})));
                    acc.add_term(m, Rational(-1));
                }
                break;
            case FieldKind::covector: {
                // Delta_{A_a} = -(D^k A_{a;k} + A_k D^k_{,a})
                const int a = ref.comps[0];
                for (int k = 1; k <= n; ++k) {
                    Monomial m1 = Monomial::atom(aux_d(k)).times(
                        Monomial::atom(Atom::jet(ref.field, ref.comps, MultiIdx{k})));
                    acc.add_term(m1, Rational(-1));
                    Monomial m2 =
                        Monomial::atom(Atom::jet(ref.field, CompIdx{k}, {}))
                            .times(Monomial::atom(aux_d(k, MultiIdx{a})));
                    acc.add_term(m2, Rational(-1));
                }
                break;
            }
            case FieldKind::symmetric2: {
                // Delta_{g_ab} = -(D^k g_{ab;k} + g_{kb} D^k_{,a} + g_{ak} D^k_{,b})
                const int a = ref.comps[0];
                const int b = ref.comps[1];
                for (int k = 1; k <= n; ++k) {
                    acc.add_term(Monomial::atom(aux_d(k)).times(Monomial::atom(
                                     Atom::jet(ref.field, ref.comps, MultiIdx{k}))),
                                 Rational(-1));
                    acc.add_term(Monomial::atom(sym_atom(ref.field, k, b))
                                     .times(Monomial::atom(aux_d(k, MultiIdx{a}))),
                                 Rational(-1));
                    acc.add_term(Monomial::atom(sym_atom(ref.field, a, k))
                                     .times(Monomial::atom(aux_d(k, MultiIdx{b}))),
                                 Rational(-1));
                }
                break;
            }
        }
        lift.comps.push_back(acc.build());
    }
    return lift;
}

DivergenceCovector generalized_divergence(const SourceEquation& T,
                                          const BundleSpec& bundle) {
    check_component_layout(bundle, T.comps, "source equation");
    for (const Expression& t : T.comps)
        if (t.has_kind(AtomKind::aux))
            throw Error("generalized divergence expects a formal-free source");

    const Density P = source_apply(T, delta_lift(bundle), bundle);
    std::vector<Expression> div = euler_operator_aux(P, bundle);

    for (const Expression& d : div)
        if (d.has_kind(AtomKind::aux))
            throw InvariantError("generalized divergence left formal atoms behind");

    // Remainder P - sum_i (Div T)_i D^i must be horizontally exact in the
    // extended variables, i.e. annihilated by the aux Euler operator.
    ExpressionBuilder rb;
    rb.add(P.coeff);
    for (int i = 1; i <= bundle.dim(); ++i)
        rb.add_product(div[static_cast<std::size_t>(i - 1)], Monomial::atom(aux_d(i)),
                       Rational(-1));
    const Density residual{rb.build()};
    for (const Expression& r : euler_operator_aux(residual, bundle))
        if (!r.is_zero())
            throw InvariantError(
                "generalized divergence residual is not horizontally exact");

    return DivergenceCovector{std::move(div)};
}

bool is_natural(const SourceEquation& T, const BundleSpec& bundle) {
    const DivergenceCovector div = generalized_divergence(T, bundle);
    bool by_divergence = true;
    for (const Expression& d : div.comps)
        if (!d.is_zero()) by_divergence = false;

    // Direct criterion: the Lie derivative of T along every lifted field
    // vanishes; for locally variational T it is E_fiber(T(Delta(D))).
    const Density P = source_apply(T, delta_lift(bundle), bundle);
    bool by_lie = true;
    for (const ComponentRef& ref : bundle.components()) {
        engine::checkpoint();
        if (!detail::euler_component(P.coeff, bundle.jet_atom(ref), bundle).is_zero()) {
            by_lie = false;
            break;
        }
    }

    if (by_divergence != by_lie)
        throw InvariantError(
            "naturality criteria disagree; is the source locally variational?");
    return by_divergence;
}

} // namespace varjet
