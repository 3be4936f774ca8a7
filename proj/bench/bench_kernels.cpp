// Serial reference vs OpenMP kernels.
#include <benchmark/benchmark.h>

#include "degenlag/dynamics.hpp"
#include "degenlag/gnh.hpp"
#include "degenlag/parser.hpp"

using namespace degenlag;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::Parallel : Exec::Serial; }

struct IndexExample {
    PontryaginSystem ps = build_pontryagin(LagrangianSystem(2, parse_expr("v1*q2", Chart::tangent(2))));
    PresymplecticSystem sys = skinner_rusk_system(ps);
    ConstraintChain chain = run_symbolic(sys);
};

const IndexExample& index_example() {
    static const IndexExample w;
    return w;
}

void BM_ClassifyPoints(benchmark::State& state) {
    const IndexExample& w = index_example();
    const PointwiseClassifier classifier(w.sys, w.chain, 1e-9);
    const PointSet pts = random_points(w.ps.box(), 4096, 1);
    for (auto _ : state) benchmark::DoNotOptimize(classify_points(classifier, pts, exec_of(state)));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pts.size()));
}

void BM_SymbolicMembership(benchmark::State& state) {
    const IndexExample& w = index_example();
    const PointSet pts = random_points(w.ps.box(), 4096, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(symbolic_membership(w.chain, w.ps.chart, pts, 1e-9, exec_of(state)));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pts.size()));
}

void BM_EvaluateBatch(benchmark::State& state) {
    const Chart tq = Chart::tangent(2);
    const CompiledExpr f(parse_expr("sin(q1)*v2 + q2^3*exp(v1/4)", tq), tq);
    const PointSet pts = random_points(Box(tq), 1 << 16, 3);
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_batch(f, pts, exec_of(state)));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pts.size()));
}

void BM_SampleVariety(benchmark::State& state) {
    const IndexExample& w = index_example();
    const Variety v(w.ps.box(), w.chain.final_constraints());
    for (auto _ : state) benchmark::DoNotOptimize(v.sample(512, 4, exec_of(state)));
}

void BM_IntegrateBatch(benchmark::State& state) {
    const Chart tq = Chart::tangent(1);
    const ExprVector field{parse_expr("v1", tq), parse_expr("-q1 - q1^3", tq)};
    const Box box(tq);
    const PointSet starts = random_points(box, 64, 5);
    for (auto _ : state) benchmark::DoNotOptimize(integrate_batch(field, box, starts, 1.0, 1e-3, exec_of(state)));
}

}  // namespace

// Argument 0: serial reference, 1: OpenMP.
BENCHMARK(BM_ClassifyPoints)->Arg(0)->Arg(1);
BENCHMARK(BM_SymbolicMembership)->Arg(0)->Arg(1);
BENCHMARK(BM_EvaluateBatch)->Arg(0)->Arg(1);
BENCHMARK(BM_SampleVariety)->Arg(0)->Arg(1);
BENCHMARK(BM_IntegrateBatch)->Arg(0)->Arg(1);

BENCHMARK_MAIN();
