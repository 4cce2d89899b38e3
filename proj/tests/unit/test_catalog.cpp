#include <doctest.h>

#include "support/numeric.hpp"
#include "varjet/catalog.hpp"
#include "varjet/parser.hpp"

using namespace varjet;

namespace {

bool sources_equal(const SourceEquation& a, const SourceEquation& b) {
    if (a.comps.size() != b.comps.size()) return false;
    for (std::size_t k = 0; k < a.comps.size(); ++k)
        if (!(a.comps[k] - b.comps[k]).is_zero()) return false;
    return true;
}

} // namespace

TEST_SUITE_BEGIN("catalog");

TEST_CASE("every builtin loads and passes its load check") {
    for (const std::string& name : builtin_model_names()) {
        const Model m = builtin_model(name);
        CHECK(m.name == name);
        CHECK((m.lagrangian.has_value() || m.source.has_value()));
    }
    CHECK_THROWS_AS(builtin_model("nope"), ModelError);
}

TEST_CASE("laplace-1d contents") {
    const Model m = builtin_model("laplace-1d");
    CHECK(m.bundle.dim() == 1);
    REQUIRE(m.source.has_value());
    CHECK(sources_equal(euler_lagrange(*m.lagrangian, m.bundle), *m.source));
    CHECK((m.source->comps[0] - parse_expression("-u[;1,1]", m.bundle)).is_zero());
}

TEST_CASE("known symmetries hold and their currents extract") {
    for (const std::string name : {"laplace-1d", "wave-1d", "laplace-2d"}) {
        const Model m = builtin_model(name);
        const SourceEquation T = effective_source(m);
        for (const auto& [sym_name, V] : m.known_symmetries) {
            CAPTURE(name);
            CAPTURE(sym_name);
            CHECK(is_symmetry(V, T, m.bundle));
            const HorizontalForm w = conserved_current(V, T, m.bundle);
            const Expression back = horizontal_differential(w, m.bundle).coeff;
            CHECK((back - source_apply(T, V, m.bundle).coeff).is_zero());
        }
    }
}

TEST_CASE("curvature vanishes identically on a line") {
    const BundleSpec b = BundleSpec(1, {{"g", FieldKind::symmetric2}});
    CHECK(scalar_curvature(b, 0).is_zero());
}

TEST_CASE("Christoffel symbols vanish numerically at a flat metric point") {
    const BundleSpec b = BundleSpec(2, {{"g", FieldKind::symmetric2}});
    std::map<Atom, double> flat;
    flat[Atom::jet(0, CompIdx{1, 1}, {})] = 1.0;
    flat[Atom::jet(0, CompIdx{2, 2}, {})] = 1.0;
    flat[Atom::jet(0, CompIdx{1, 2}, {})] = 0.0;
    for (int a = 1; a <= 2; ++a)
        for (int bb = a; bb <= 2; ++bb)
            for (int i = 1; i <= 2; ++i) {
                CompIdx c;
                c.push_back(a);
                c.push_back(bb);
                flat[Atom::jet(0, c, MultiIdx{i})] = 0.0;
            }
    flat[b.root_atom(0)] = 1.0;
    for (int c = 1; c <= 2; ++c)
        for (int a = 1; a <= 2; ++a)
            for (int bb = 1; bb <= 2; ++bb)
                CHECK(christoffel(b, 0, c, a, bb).evaluate(flat) ==
                      doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("covariant oracle vanishes on constant sources over flat metrics") {
    const BundleSpec b =
        BundleSpec(2, {{"g", FieldKind::symmetric2}, {"T", FieldKind::symmetric2}});
    const SourceEquation T{{parse_expression("T[1,1]", b), parse_expression("T[1,2]", b),
                            parse_expression("T[2,2]", b), Expression::zero(),
                            Expression::zero(), Expression::zero()}};
    const std::vector<Expression> oracle = covariant_divergence_oracle(b, T);

    std::map<Atom, double> flat;
    for (int f = 0; f < 2; ++f)
        for (int a = 1; a <= 2; ++a)
            for (int bb = a; bb <= 2; ++bb) {
                CompIdx c;
                c.push_back(a);
                c.push_back(bb);
                flat[Atom::jet(f, c, {})] = (a == bb) ? 1.0 : 0.0;
                for (int i = 1; i <= 2; ++i) flat[Atom::jet(f, c, MultiIdx{i})] = 0.0;
                for (int i = 1; i <= 2; ++i)
                    for (int j = i; j <= 2; ++j)
                        flat[Atom::jet(f, c, MultiIdx{i, j})] = 0.0;
            }
    flat[b.root_atom(0)] = 1.0;
    flat[Atom::root(1, 2)] = 1.0;
    for (const Expression& comp : oracle)
        CHECK(comp.evaluate(flat) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("maxwell density is nontrivial and first order") {
    const Model m = builtin_model("maxwell-2d");
    REQUIRE(m.lagrangian.has_value());
    CHECK_FALSE(m.lagrangian->coeff.is_zero());
    CHECK(m.lagrangian->coeff.jet_order() == 1);
}

TEST_CASE("hilbert density is nontrivial and second order") {
    const Model m = builtin_model("hilbert-2d");
    REQUIRE(m.lagrangian.has_value());
    CHECK_FALSE(m.lagrangian->coeff.is_zero());
    CHECK(m.lagrangian->coeff.jet_order() == 2);
}

TEST_CASE("generic models expose phantom coefficients") {
    const Model m = builtin_model("metric-generic-2d");
    REQUIRE(m.source.has_value());
    CHECK_FALSE(m.source->comps[0].is_zero());
    CHECK(m.source->comps[3].is_zero());
}

TEST_SUITE_END();
