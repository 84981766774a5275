#include <benchmark/benchmark.h>

#include "hzplate/assembly.hpp"
#include "hzplate/mesh.hpp"

namespace {

using namespace hzplate;

// HZ mass block on the square; dominates TFSRM assembly time.
void BM_HzMassBlock(benchmark::State& state) {
  const Mesh mesh = square_mesh(static_cast<int>(state.range(0)));
  const FeSpace hz(mesh, {SpaceKind::HZ, 3, 1});
  const Eigen::MatrixXd weight = Eigen::MatrixXd::Identity(3, 3);
  const int degree = assembly_degree(3, mesh.geo_order());
  for (auto _ : state) {
    const SparseMatrix m = assemble_block(hz, Operator::Value, hz, Operator::Value, weight, degree);
    benchmark::DoNotOptimize(m.nonZeros());
  }
  state.counters["dofs"] = hz.num_dofs();
}
BENCHMARK(BM_HzMassBlock)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_DivCoupling(benchmark::State& state) {
  const Mesh mesh = square_mesh(static_cast<int>(state.range(0)));
  const FeSpace hz(mesh, {SpaceKind::HZ, 3, 1});
  const FeSpace dg(mesh, {SpaceKind::DG, 2, 2});
  const Eigen::MatrixXd weight = Eigen::MatrixXd::Identity(2, 2);
  const int degree = assembly_degree(3, mesh.geo_order());
  for (auto _ : state) {
    const SparseMatrix b = assemble_block(dg, Operator::Value, hz, Operator::Div, weight, degree);
    benchmark::DoNotOptimize(b.nonZeros());
  }
}
BENCHMARK(BM_DivCoupling)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace
