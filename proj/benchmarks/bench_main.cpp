#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "mse/advect.hpp"

using namespace mse;

namespace {

std::shared_ptr<const Mesh2D> mesh_for(int p) { return build_distorted(4, 4, p, 0.02); }

void BM_MassMatrix1(benchmark::State& st) {
  const auto m = mesh_for(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(mass_matrix(*m, 1));
}
BENCHMARK(BM_MassMatrix1)->Arg(3)->Arg(6)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_WedgeMatrix(benchmark::State& st) {
  const auto m = mesh_for(static_cast<int>(st.range(0)));
  const auto v = VelocityField::rudman_vortex();
  for (auto _ : st) benchmark::DoNotOptimize(wedge_matrix(*m, v, 2));
}
BENCHMARK(BM_WedgeMatrix)->Arg(3)->Arg(6)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_Reduce(benchmark::State& st) {
  const auto m = mesh_for(static_cast<int>(st.range(0)));
  const auto f = AnalyticForm::two_form(
      [](double x, double y) { return std::sin(std::numbers::pi * x) * std::sin(std::numbers::pi * y); });
  for (auto _ : st) benchmark::DoNotOptimize(reduce(f, m));
}
BENCHMARK(BM_Reduce)->Arg(3)->Arg(9)->Unit(benchmark::kMillisecond);

AdvectionProblem problem(int p, int pt) {
  const auto m = mesh_for(p);
  const auto f = AnalyticForm::two_form([](double x, double y) { return std::sin(2 * std::numbers::pi * x) * y; });
  return {m, VelocityField::rudman_vortex(), reduce(f, m), pt, 0.1, 1.0, std::nullopt};
}

void BM_StepperFactor(benchmark::State& st) {
  const auto pr = problem(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  const auto op = build_operator(pr);
  for (auto _ : st) AdvectionStepper s(op, build_time_basis(pr.pt, pr.dt));
}
BENCHMARK(BM_StepperFactor)->Args({6, 2})->Args({9, 2})->Args({9, 4})->Unit(benchmark::kMillisecond);

void BM_Step(benchmark::State& st) {
  const auto pr = problem(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  const AdvectionStepper s(build_operator(pr), build_time_basis(pr.pt, pr.dt));
  Eigen::VectorXd y = pr.initial.coeffs;
  for (auto _ : st) {
    y = s.step(y);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_Step)->Args({6, 2})->Args({9, 2})->Args({9, 4})->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
