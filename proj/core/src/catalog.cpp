#include "varjet/catalog.hpp"

#include "varjet/parser.hpp"

namespace varjet {

namespace {

Atom sym_atom(int field, int a, int b, MultiIdx derivs = {}) {
    CompIdx c;
    c.push_back(std::min(a, b));
    c.push_back(std::max(a, b));
    return Atom::jet(field, c, derivs);
}

Expression sym_expr(int field, int a, int b, MultiIdx derivs = {}) {
    return Expression::from_atom(sym_atom(field, a, b, derivs));
}

Expression inverse_metric(const BundleSpec& bundle, int gfield, int a, int b) {
    return adjugate_entry(gfield, bundle.dim(), a, b) *
           Expression::from_atom(bundle.root_atom(gfield), -2);
}

SourceEquation parse_source(const BundleSpec& b, const std::vector<std::string>& comps) {
    SourceEquation T;
    for (const std::string& s : comps) T.comps.push_back(parse_expression(s, b));
    return T;
}

EvolutionaryField parse_field(const BundleSpec& b, const std::vector<std::string>& comps) {
    EvolutionaryField V;
    for (const std::string& s : comps) V.comps.push_back(parse_expression(s, b));
    return V;
}

Model make_scalar_model(const std::string& name, int n, const std::string& lagrangian,
                        const std::string& source,
                        std::vector<std::pair<std::string, std::string>> syms,
                        const std::string& notes) {
    BundleSpec b(n, {{"u", FieldKind::scalar}});
    Model m{name, b, Density{parse_expression(lagrangian, b)},
            parse_source(b, {source}), {}, notes};
    for (auto& [sname, expr] : syms)
        m.known_symmetries.emplace_back(sname, parse_field(b, {expr}));
    return m;
}

Density maxwell_density(const BundleSpec& b, int gfield, int afield) {
    const int n = b.dim();
    // F_{ij} = A_{j;i} - A_{i;j}
    const auto F = [&](int i, int j) {
        return Expression::from_atom(Atom::jet(afield, CompIdx{j}, MultiIdx{i})) -
               Expression::from_atom(Atom::jet(afield, CompIdx{i}, MultiIdx{j}));
    };
    ExpressionBuilder acc;
    const Expression root = Expression::from_atom(b.root_atom(gfield));
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            for (int k = 1; k <= n; ++k)
                for (int l = 1; l <= n; ++l) {
                    const Expression fij = F(i, j);
                    if (fij.is_zero()) continue;
                    const Expression fkl = F(k, l);
                    if (fkl.is_zero()) continue;
                    acc.add_product(fij * fkl * inverse_metric(b, gfield, i, k) *
                                        inverse_metric(b, gfield, j, l) * root,
                                    Monomial::unit(), Rational(-1, 4));
                }
    return Density{acc.build()};
}

Model make_hilbert() {
    BundleSpec b(2, {{"g", FieldKind::symmetric2}});
    const int g = 0;
    Density L{Expression::from_atom(b.root_atom(g)) * scalar_curvature(b, g)};
    return Model{"hilbert-2d", b, L, std::nullopt, {},
                 "Einstein-Hilbert density in two dimensions; its source equation "
                 "vanishes identically"};
}

Model make_maxwell() {
    BundleSpec b(2, {{"g", FieldKind::symmetric2}, {"A", FieldKind::covector}});
    return Model{"maxwell-2d", b, maxwell_density(b, 0, 1), std::nullopt, {},
                 "Maxwell density -1/4 sqrtdet(g) F_ij F_kl inv(g)[i,k] inv(g)[j,l] "
                 "on the metric x cotangent bundle"};
}

Model make_metric_generic() {
    BundleSpec b(2, {{"g", FieldKind::symmetric2}, {"T", FieldKind::symmetric2}});
    SourceEquation src = parse_source(b, {"T[1,1]", "T[1,2]", "T[2,2]", "0", "0", "0"});
    return Model{"metric-generic-2d", b, std::nullopt, src, {},
                 "generic source on the bundle of metrics; the coefficients are the "
                 "jet variables of the phantom field T"};
}

Model make_em_generic() {
    BundleSpec b(2, {{"g", FieldKind::symmetric2},
                     {"A", FieldKind::covector},
                     {"T", FieldKind::symmetric2},
                     {"J", FieldKind::covector}});
    SourceEquation src = parse_source(
        b, {"T[1,1]", "T[1,2]", "T[2,2]", "J[1]", "J[2]", "0", "0", "0", "0", "0"});
    return Model{"em-generic-2d", b, std::nullopt, src, {},
                 "generic source pair (T, J) on the metric x cotangent bundle with "
                 "phantom coefficient fields"};
}

} // namespace

const std::vector<std::string>& builtin_model_names() {
    static const std::vector<std::string> names = {
        "laplace-1d",  "wave-1d",        "laplace-2d",       "hilbert-2d",
        "maxwell-2d",  "metric-generic-2d", "em-generic-2d"};
    return names;
}

Model builtin_model(const std::string& name) {
    Model m = [&]() -> Model {
        if (name == "laplace-1d")
            return make_scalar_model(
                "laplace-1d", 1, "1/2*u[;1]^2", "-u[;1,1]",
                {{"translation", "u[;1]"}, {"shift", "1"}},
                "free scalar in one dimension");
        if (name == "wave-1d")
            return make_scalar_model(
                "wave-1d", 2, "1/2*u[;1]^2 - 1/2*u[;2]^2", "-u[;1,1] + u[;2,2]",
                {{"time-translation", "u[;1]"},
                 {"space-translation", "u[;2]"},
                 {"shift", "1"}},
                "wave equation with x[1] the time coordinate");
        if (name == "laplace-2d")
            return make_scalar_model(
                "laplace-2d", 2, "1/2*u[;1]^2 + 1/2*u[;2]^2", "-u[;1,1] - u[;2,2]",
                {{"translation-1", "u[;1]"}, {"translation-2", "u[;2]"}, {"shift", "1"}},
                "free scalar in two dimensions");
        if (name == "hilbert-2d") return make_hilbert();
        if (name == "maxwell-2d") return make_maxwell();
        if (name == "metric-generic-2d") return make_metric_generic();
        if (name == "em-generic-2d") return make_em_generic();
        throw ModelError("unknown builtin model '" + name + "'");
    }();

    if (m.lagrangian && m.source) {
        const SourceEquation derived = euler_lagrange(*m.lagrangian, m.bundle);
        for (std::size_t k = 0; k < derived.comps.size(); ++k)
            if (!(derived.comps[k] - m.source->comps[k]).is_zero())
                throw ModelError("model '" + name +
                                 "': stored source differs from E(L)");
    }
    return m;
}

SourceEquation effective_source(const Model& m) {
    if (m.source) return *m.source;
    if (m.lagrangian) return euler_lagrange(*m.lagrangian, m.bundle);
    throw ModelError("model '" + m.name + "' has neither source nor Lagrangian");
}

const EvolutionaryField* find_symmetry(const Model& m, const std::string& name) {
    for (const auto& [n, v] : m.known_symmetries)
        if (n == name) return &v;
    return nullptr;
}

Expression christoffel(const BundleSpec& bundle, int gfield, int c, int a, int b) {
    const int n = bundle.dim();
    ExpressionBuilder acc;
    for (int k = 1; k <= n; ++k) {
        const Expression bracket = sym_expr(gfield, k, a, MultiIdx{b}) +
                                   sym_expr(gfield, k, b, MultiIdx{a}) -
                                   sym_expr(gfield, a, b, MultiIdx{k});
        acc.add_product(inverse_metric(bundle, gfield, c, k), bracket, Rational(1, 2));
    }
    return acc.build();
}

Expression scalar_curvature(const BundleSpec& bundle, int gfield) {
    const int n = bundle.dim();
    std::vector<std::vector<std::vector<Expression>>> gamma(
        static_cast<std::size_t>(n + 1),
        std::vector<std::vector<Expression>>(static_cast<std::size_t>(n + 1),
                                             std::vector<Expression>(
                                                 static_cast<std::size_t>(n + 1))));
    for (int c = 1; c <= n; ++c)
        for (int a = 1; a <= n; ++a)
            for (int b = a; b <= n; ++b) {
                gamma[c][a][b] = christoffel(bundle, gfield, c, a, b);
                gamma[c][b][a] = gamma[c][a][b];
            }

    // R_ab = d_c Gamma^c_ab - d_a Gamma^c_cb + Gamma^c_cd Gamma^d_ab
    //        - Gamma^c_ad Gamma^d_cb
    const auto ricci = [&](int a, int b) {
        ExpressionBuilder acc;
        for (int c = 1; c <= n; ++c) {
            acc.add(total_derivative(gamma[c][a][b], c, bundle));
            acc.add(total_derivative(gamma[c][c][b], a, bundle), Rational(-1));
            for (int d = 1; d <= n; ++d) {
                acc.add_product(gamma[c][c][d], gamma[d][a][b]);
                acc.add_product(gamma[c][a][d], gamma[d][c][b], Rational(-1));
            }
        }
        return acc.build();
    };

    ExpressionBuilder r;
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b) {
            engine::checkpoint();
            r.add_product(inverse_metric(bundle, gfield, a, b), ricci(a, b));
        }
    return r.build();
}

std::vector<Expression> covariant_divergence_oracle(const BundleSpec& bundle,
                                                    const SourceEquation& T) {
    check_component_layout(bundle, T.comps, "source equation");
    const int n = bundle.dim();
    if (n > 3) throw ModelError("covariant divergence oracle supports n <= 3");

    int gfield = -1, afield = -1;
    for (std::size_t f = 0; f < bundle.fields().size(); ++f) {
        if (gfield < 0 && bundle.field(static_cast<int>(f)).kind == FieldKind::symmetric2)
            gfield = static_cast<int>(f);
        if (afield < 0 && bundle.field(static_cast<int>(f)).kind == FieldKind::covector)
            afield = static_cast<int>(f);
    }
    if (gfield < 0) throw ModelError("oracle needs a metric (symmetric2) field");

    const Expression root = Expression::from_atom(bundle.root_atom(gfield));
    const Expression root_inv = Expression::from_atom(bundle.root_atom(gfield), -1);

    // Component lookup helpers against the bundle's layout.
    const auto comp_expr = [&](int field, CompIdx comps) -> const Expression& {
        const auto ord = bundle.component_ordinal({field, comps});
        if (!ord) throw ModelError("component lookup failed in the oracle");
        return T.comps[static_cast<std::size_t>(*ord)];
    };

    // Full-tensor density components: off-diagonal halves of the independent
    // components, so that sum_full T^{ab} dg_ab = sum_{a<=b} T^{ab}_comp dg_ab.
    const auto t_full = [&](int a, int b) {
        CompIdx c;
        c.push_back(std::min(a, b));
        c.push_back(std::max(a, b));
        const Expression& v = comp_expr(gfield, c);
        return a == b ? v : v.scaled(Rational(1, 2));
    };

    std::vector<std::vector<std::vector<Expression>>> gamma(
        static_cast<std::size_t>(n + 1),
        std::vector<std::vector<Expression>>(static_cast<std::size_t>(n + 1),
                                             std::vector<Expression>(
                                                 static_cast<std::size_t>(n + 1))));
    for (int c = 1; c <= n; ++c)
        for (int a = 1; a <= n; ++a)
            for (int b = a; b <= n; ++b) {
                gamma[c][a][b] = christoffel(bundle, gfield, c, a, b);
                gamma[c][b][a] = gamma[c][a][b];
            }

    // nabla_c Tbar^{cb} with Tbar = T_full / sqrtdet.
    std::vector<Expression> div_tbar(static_cast<std::size_t>(n + 1));
    for (int b = 1; b <= n; ++b) {
        ExpressionBuilder acc;
        for (int c = 1; c <= n; ++c) {
            acc.add(total_derivative(t_full(c, b) * root_inv, c, bundle));
            for (int m = 1; m <= n; ++m) {
                acc.add_product(gamma[c][c][m], t_full(m, b) * root_inv);
                acc.add_product(gamma[b][c][m], t_full(c, m) * root_inv);
            }
        }
        div_tbar[static_cast<std::size_t>(b)] = acc.build();
    }

    std::vector<Expression> out(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        ExpressionBuilder acc;
        for (int b = 1; b <= n; ++b)
            acc.add_product(sym_expr(gfield, i, b) * root,
                            div_tbar[static_cast<std::size_t>(b)], Rational(2));
        out[static_cast<std::size_t>(i - 1)] = acc.build();
    }

    if (afield >= 0) {
        // J^a = source components on the covector directions; Jbar = J/sqrtdet.
        const auto j_comp = [&](int a) -> const Expression& {
            return comp_expr(afield, CompIdx{a});
        };
        const auto a_atom = [&](int a, MultiIdx derivs = {}) {
            return Expression::from_atom(Atom::jet(afield, CompIdx{a}, derivs));
        };

        // div_g Jbar = D_a Jbar^a + Gamma^a_{am} Jbar^m
        ExpressionBuilder divj;
        for (int a = 1; a <= n; ++a) {
            divj.add(total_derivative(j_comp(a) * root_inv, a, bundle));
            for (int m = 1; m <= n; ++m)
                divj.add_product(gamma[a][a][m], j_comp(m) * root_inv);
        }
        const Expression div_jbar = divj.build();

        for (int i = 1; i <= n; ++i) {
            ExpressionBuilder acc;
            acc.add(out[static_cast<std::size_t>(i - 1)]);
            // (i_J dA)_i = J^a (D_a A_i - D_i A_a)
            for (int a = 1; a <= n; ++a)
                acc.add_product(j_comp(a),
                                total_derivative(a_atom(i), a, bundle) -
                                    total_derivative(a_atom(a), i, bundle));
            // (div_g Jbar) sqrtdet A_i
            acc.add_product(div_jbar * root, a_atom(i));
            out[static_cast<std::size_t>(i - 1)] = acc.build();
        }
    }
    return out;
}

} // namespace varjet
