#include <benchmark/benchmark.h>

#include <random>

#include "varjet/catalog.hpp"
#include "varjet/parser.hpp"

using namespace varjet;

namespace {

Expression random_poly(std::mt19937& rng, const BundleSpec& b, int terms) {
    std::uniform_int_distribution<std::size_t> comp(0, b.components().size() - 1);
    std::uniform_int_distribution<int> order(0, 2);
    std::uniform_int_distribution<int> dir(1, b.dim());
    std::uniform_int_distribution<int> num(-4, 4);
    ExpressionBuilder acc;
    for (int t = 0; t < terms; ++t) {
        Monomial m;
        for (int a = 0; a < 3; ++a) {
            MultiIdx d;
            const int ord = order(rng);
            for (int k = 0; k < ord; ++k) d.insert_sorted(dir(rng));
            m = m.times(Monomial::atom(b.jet_atom(b.components()[comp(rng)], d)));
        }
        int c = num(rng);
        acc.add_term(m, Rational(c == 0 ? 1 : c, 2));
    }
    return acc.build();
}

void BM_multiply_normalize(benchmark::State& state) {
    std::mt19937 rng(1);
    const BundleSpec b(2, {{"g", FieldKind::symmetric2}});
    const Expression p = random_poly(rng, b, static_cast<int>(state.range(0)));
    const Expression q =
        random_poly(rng, b, static_cast<int>(state.range(0))) *
        Expression::from_atom(b.root_atom(0), -1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(p * q);
    }
}
BENCHMARK(BM_multiply_normalize)->Arg(8)->Arg(32)->Arg(128);

void BM_total_derivative(benchmark::State& state) {
    std::mt19937 rng(2);
    const BundleSpec b(2, {{"u", FieldKind::scalar}, {"g", FieldKind::symmetric2}});
    const Expression e = random_poly(rng, b, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(total_derivative(e, 1, b));
    }
}
BENCHMARK(BM_total_derivative)->Arg(16)->Arg(64)->Arg(256);

void BM_euler_lagrange_laplace2d(benchmark::State& state) {
    const Model m = builtin_model("laplace-2d");
    for (auto _ : state) {
        benchmark::DoNotOptimize(euler_lagrange(*m.lagrangian, m.bundle));
    }
}
BENCHMARK(BM_euler_lagrange_laplace2d);

void BM_euler_lagrange_hilbert(benchmark::State& state) {
    const Model m = builtin_model("hilbert-2d");
    for (auto _ : state) {
        benchmark::DoNotOptimize(euler_lagrange(*m.lagrangian, m.bundle));
    }
}
BENCHMARK(BM_euler_lagrange_hilbert);

void BM_divergence_maxwell(benchmark::State& state) {
    const Model m = builtin_model("maxwell-2d");
    const SourceEquation T = effective_source(m);
    for (auto _ : state) {
        benchmark::DoNotOptimize(generalized_divergence(T, m.bundle));
    }
}
BENCHMARK(BM_divergence_maxwell);

void BM_conserved_current_wave(benchmark::State& state) {
    const Model m = builtin_model("wave-1d");
    const SourceEquation T = effective_source(m);
    const EvolutionaryField* V = find_symmetry(m, "time-translation");
    for (auto _ : state) {
        benchmark::DoNotOptimize(conserved_current(*V, T, m.bundle));
    }
}
BENCHMARK(BM_conserved_current_wave);

void BM_tonti_roundtrip(benchmark::State& state) {
    std::mt19937 rng(3);
    const BundleSpec b(2, {{"u", FieldKind::scalar}});
    const Density L{random_poly(rng, b, 12)};
    const SourceEquation T = euler_lagrange(L, b);
    for (auto _ : state) {
        benchmark::DoNotOptimize(euler_lagrange(tonti_lagrangian(T, b), b));
    }
}
BENCHMARK(BM_tonti_roundtrip);

void BM_scalar_curvature(benchmark::State& state) {
    const BundleSpec b(2, {{"g", FieldKind::symmetric2}});
    for (auto _ : state) {
        benchmark::DoNotOptimize(scalar_curvature(b, 0));
    }
}
BENCHMARK(BM_scalar_curvature);

} // namespace

BENCHMARK_MAIN();
