#include <benchmark/benchmark.h>

#include "hzplate/basis.hpp"
#include "hzplate/mesh.hpp"

namespace {

using namespace hzplate;

void BM_HzEvaluate(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const Mesh mesh = disk_mesh(24, 3);
  const Vec2 xi(0.21, 0.37);
  Eigen::MatrixXd value, div;
  for (auto _ : state) {
    for (int e = 0; e < mesh.num_elements(); ++e) {
      hz_evaluate(mesh, e, p, xi, mesh.geometry(e, xi), value, div);
      benchmark::DoNotOptimize(value.data());
    }
  }
  state.SetItemsProcessed(state.iterations() * mesh.num_elements());
}
BENCHMARK(BM_HzEvaluate)->DenseRange(3, 6);

void BM_RtEvaluate(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const Mesh mesh = disk_mesh(24, 3);
  const Vec2 xi(0.21, 0.37);
  Eigen::MatrixXd value, div;
  for (auto _ : state) {
    for (int e = 0; e < mesh.num_elements(); ++e) {
      rt_evaluate(mesh, e, k, xi, mesh.geometry(e, xi), value, div);
      benchmark::DoNotOptimize(value.data());
    }
  }
  state.SetItemsProcessed(state.iterations() * mesh.num_elements());
}
BENCHMARK(BM_RtEvaluate)->DenseRange(2, 5);

}  // namespace
