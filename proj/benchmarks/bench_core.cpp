#include <benchmark/benchmark.h>

#include "lifted/geometry.hpp"
#include "lifted/measure.hpp"
#include "lifted/model.hpp"
#include "lifted/projections.hpp"
#include "lifted/solver.hpp"

using namespace lifted;

namespace {

Matrix random_symmetric(int n, std::uint64_t seed) {
  Rng rng(seed);
  Matrix S(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = j; i < n; ++i) S(i, j) = S(j, i) = rng.normal();
  return S;
}

// Sizes are (n, m) with m = 20n, the regime of the recovery experiments.
void BM_LiftedOperator(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DesignMatrix A = sample_design(20 * n, n, 1);
  const Matrix X = random_symmetric(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(apply_lifted_operator(A, X));
}
BENCHMARK(BM_LiftedOperator)->Arg(10)->Arg(20)->Arg(50);

void BM_LiftedAdjoint(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DesignMatrix A = sample_design(20 * n, n, 1);
  Rng rng(3);
  Vector r(A.rows());
  for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(adjoint_lifted_operator(A, r));
}
BENCHMARK(BM_LiftedAdjoint)->Arg(10)->Arg(20)->Arg(50);

void BM_ProjectTraceCappedPsd(benchmark::State& state) {
  const Matrix S = random_symmetric(static_cast<int>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(project_trace_capped_psd(S, 1.0));
}
BENCHMARK(BM_ProjectTraceCappedPsd)->Arg(20)->Arg(50)->Arg(100);

void BM_ProjectL1Ball(benchmark::State& state) {
  const Matrix S = random_symmetric(static_cast<int>(state.range(0)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(project_l1_ball(S, 3.0));
}
BENCHMARK(BM_ProjectL1Ball)->Arg(20)->Arg(50)->Arg(100);

void BM_DykstraPsdL1(benchmark::State& state) {
  const Matrix S = random_symmetric(static_cast<int>(state.range(0)), 6);
  const ConstraintSet sets[] = {ConstraintSet::l1_ball(3.0), ConstraintSet::psd_trace_cap(1.0)};
  for (auto _ : state) benchmark::DoNotOptimize(dykstra_intersection(S, sets, {1e-9, true, 500, false}));
}
BENCHMARK(BM_DykstraPsdL1)->Arg(20)->Arg(50);

void BM_QuadratureMoments(benchmark::State& state) {
  const auto link = make_link("f2");
  for (auto _ : state) benchmark::DoNotOptimize(compute_moments(link));
}
BENCHMARK(BM_QuadratureMoments);

void BM_SolveQuadratic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto link = make_link("quadratic");
  const auto e = simulate_ensemble(link, make_signal(n, std::nullopt, 7), 20 * n, 8);
  ProgramSpec spec;
  spec.mu_tilde = 1.0;
  spec.loss = LossKind::mean_offset;
  for (auto _ : state) benchmark::DoNotOptimize(solve_lifted(spec, e, {}));
}
BENCHMARK(BM_SolveQuadratic)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_PsdPolarWidth(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto p = sample_noise_weights(make_link("f1"), 1.0, 4 * n, 9);
  for (auto _ : state) benchmark::DoNotOptimize(empirical_width_polar_psd(n, 4 * n, p, 10, 10));
}
BENCHMARK(BM_PsdPolarWidth)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
