#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "densitybench/density.hpp"
#include "densitybench/histmodels.hpp"
#include "densitybench/pricing.hpp"

using namespace dbench;

static void BM_HestonPricer(benchmark::State& state) {
  pricing::HestonParams p{2.0, 0.04, 0.3, -0.5, 0.04};
  const double F = 10000.0, tau = 28.0 / 252.0;
  std::vector<double> strikes;
  for (double m = 0.85; m <= 1.151; m += 0.03) strikes.push_back(F * m);
  for (auto _ : state) {
    pricing::CfPricer pricer(pricing::cf_heston(p, F, tau), F, 0.02, tau, 4.0);
    benchmark::DoNotOptimize(pricer.calls(strikes));
  }
}
BENCHMARK(BM_HestonPricer);

static void BM_HestonCdfGrid(benchmark::State& state) {
  pricing::HestonParams p{2.0, 0.04, 0.3, -0.5, 0.04};
  const double F = 10000.0, tau = 28.0 / 252.0;
  GridSpec grid;
  std::vector<double> ln_xs = grid.points();
  for (double& x : ln_xs) x += std::log(F);
  pricing::FourierInverter inv(pricing::cf_heston(p, F, tau));
  for (auto _ : state) benchmark::DoNotOptimize(inv.cdf_ln_grid(ln_xs));
}
BENCHMARK(BM_HestonCdfGrid);

static void BM_GarchFit(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> z;
  const double omega = 2e-6, alpha = 0.07, beta = 0.90;
  double s2 = omega / (1.0 - alpha - beta);
  hist::ReturnWindow w;
  w.label = "5y";
  for (int t = 0; t < 1260; ++t) {
    const double e = std::sqrt(s2) * z(rng);
    w.returns.push_back(e);
    s2 = omega + alpha * e * e + beta * s2;
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(
        hist::calibrate_garch(w, hist::GarchVariant::Normal));
}
BENCHMARK(BM_GarchFit)->Unit(benchmark::kMillisecond);

static void BM_EmpiricalDensity(benchmark::State& state) {
  hist::SimInputs in;
  in.model = hist::HistModel::LnHis;
  in.mu = 0.0;
  in.sigma_daily = 0.012;
  auto ps = hist::simulate_paths(in, 10000.0, 20, 100000, 42);
  GridSpec grid;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        hist::empirical_density(ps, grid, Date(2016, 11, 18),
                                Date(2016, 12, 16)));
}
BENCHMARK(BM_EmpiricalDensity)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
