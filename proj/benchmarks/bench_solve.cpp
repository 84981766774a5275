#include <benchmark/benchmark.h>

#include "hzplate/analytic.hpp"
#include "hzplate/formulations.hpp"
#include "hzplate/mesh.hpp"

namespace {

using namespace hzplate;

void run(benchmark::State& state, Formulation f, bool condense) {
  const Mesh mesh = square_mesh(static_cast<int>(state.range(0)));
  const AnalyticSolution exact = analytic_square(Material{});
  PlateProblem pr;
  pr.formulation = f;
  pr.mesh = &mesh;
  pr.load = exact.load;
  pr.condense = condense;
  int dofs = 0;
  for (auto _ : state) {
    const SolutionFields s = solve(pr);
    dofs = s.num_dofs;
    benchmark::DoNotOptimize(s.w.data());
  }
  state.counters["dofs"] = dofs;
}

void BM_SolveTfsrm(benchmark::State& state) { run(state, Formulation::TFSRM, true); }
void BM_SolveTfsrmUncondensed(benchmark::State& state) { run(state, Formulation::TFSRM, false); }
void BM_SolveQfsrm(benchmark::State& state) { run(state, Formulation::QFSRM, true); }
void BM_SolvePrm(benchmark::State& state) { run(state, Formulation::PRM, true); }

BENCHMARK(BM_SolveTfsrm)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveTfsrmUncondensed)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveQfsrm)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolvePrm)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace
