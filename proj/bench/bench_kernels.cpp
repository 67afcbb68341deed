// OpenMP kernels against their serial reference loops.

#include <benchmark/benchmark.h>

#include "emv/analysis.hpp"
#include "emv/gfunc.hpp"
#include "emv/means.hpp"

namespace {

emv::ScanSpec grid(int n) {
  emv::ScanSpec s;
  s.lo = -10.0;
  s.hi = 10.0;
  s.n_points = n;
  s.property = emv::Property::convex;
  return s;
}

const emv::MeanArgs kBase{-1.3, 2.7, 0.8, 6.1};

double log_F(double w) { return emv::log_F({kBase, w}); }

void BM_ScanParallel(benchmark::State& st) {
  const auto spec = grid(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(emv::scan(log_F, spec));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_ScanSerial(benchmark::State& st) {
  const auto spec = grid(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(emv::scan_serial(log_F, spec));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

double mean(double r, double s) { return emv::eval_E({r, s, 0.8, 6.1}); }

void BM_SchurParallel(benchmark::State& st) {
  const auto pairs = emv::gen_majorization_pairs(1, static_cast<std::size_t>(st.range(0)), emv::Quadrant::nonneg, 10);
  for (auto _ : st) benchmark::DoNotOptimize(emv::schur_check(mean, pairs, emv::SchurMode::concave));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_SchurSerial(benchmark::State& st) {
  const auto pairs = emv::gen_majorization_pairs(1, static_cast<std::size_t>(st.range(0)), emv::Quadrant::nonneg, 10);
  for (auto _ : st) benchmark::DoNotOptimize(emv::schur_check_serial(mean, pairs, emv::SchurMode::concave));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

// Integrand-heavy case: each point runs an adaptive quadrature.
double quad_mean(double r, double s) { return emv::ln_E_quadrature({r, s, 0.8, 6.1}); }

void BM_SchurQuadratureParallel(benchmark::State& st) {
  const auto pairs = emv::gen_majorization_pairs(2, static_cast<std::size_t>(st.range(0)), emv::Quadrant::nonpos, 10);
  for (auto _ : st) benchmark::DoNotOptimize(emv::schur_check(quad_mean, pairs, emv::SchurMode::convex));
}

void BM_SchurQuadratureSerial(benchmark::State& st) {
  const auto pairs = emv::gen_majorization_pairs(2, static_cast<std::size_t>(st.range(0)), emv::Quadrant::nonpos, 10);
  for (auto _ : st) benchmark::DoNotOptimize(emv::schur_check_serial(quad_mean, pairs, emv::SchurMode::convex));
}

}  // namespace

BENCHMARK(BM_ScanParallel)->Arg(401)->Arg(4001)->Arg(40001);
BENCHMARK(BM_ScanSerial)->Arg(401)->Arg(4001)->Arg(40001);
BENCHMARK(BM_SchurParallel)->Arg(1000)->Arg(10000);
BENCHMARK(BM_SchurSerial)->Arg(1000)->Arg(10000);
BENCHMARK(BM_SchurQuadratureParallel)->Arg(200);
BENCHMARK(BM_SchurQuadratureSerial)->Arg(200);

BENCHMARK_MAIN();
