#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "densitybench/histmodels.hpp"
#include "densitybench/stats.hpp"

using namespace dbench;

namespace {

std::vector<double> simulate_garch(double mu, double omega, double alpha,
                                   double beta, double gamma, int n,
                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  std::vector<double> out;
  double s2 = omega / (1.0 - alpha - beta - 0.5 * gamma);
  for (int t = 0; t < n; ++t) {
    const double e = std::sqrt(s2) * z(rng);
    out.push_back(mu + e);
    s2 = omega + (alpha + (e < 0.0 ? gamma : 0.0)) * e * e + beta * s2;
  }
  return out;
}

hist::ReturnWindow make_window(std::vector<double> rets, const char* label) {
  hist::ReturnWindow w;
  w.returns = std::move(rets);
  w.label = label;
  w.end_date = Date(2016, 11, 18);
  return w;
}

}  // namespace

TEST_SUITE_BEGIN("histmodels");

TEST_CASE("lognormal calibration equals sample moments") {
  auto w = make_window({0.01, -0.02, 0.005, 0.015, -0.01, 0.0, 0.02, -0.005,
                        0.01, -0.015, 0.0, 0.005},
                       "6m");
  // pad to the minimum length with a repeating pattern
  while (w.returns.size() < 60)
    w.returns.push_back(w.returns[w.returns.size() % 12]);
  auto [mu, sd] = hist::calibrate_lognormal_hist(w);
  CHECK(mu == doctest::Approx(stats::mean(w.returns)).epsilon(1e-14));
  CHECK(sd == doctest::Approx(stats::stddev(w.returns)).epsilon(1e-14));

  auto flat = make_window(std::vector<double>(100, 0.01), "6m");
  CHECK_THROWS_WITH_AS(hist::calibrate_lognormal_hist(flat),
                       doctest::Contains("zero variance"), std::runtime_error);
}

TEST_CASE("bootstrap draws live in the demeaned support and are seeded") {
  auto w = make_window(simulate_garch(0.0005, 2e-6, 0.05, 0.9, 0.0, 126, 3),
                       "6m");
  const double mu = 0.0002;
  auto d1 = hist::bootstrap_draw(w, mu, 500, 99);
  auto d2 = hist::bootstrap_draw(w, mu, 500, 99);
  auto d3 = hist::bootstrap_draw(w, mu, 500, 100);
  CHECK(d1 == d2);
  CHECK(d1 != d3);
  const double wmean = stats::mean(w.returns);
  for (double x : d1) {
    bool found = false;
    for (double r : w.returns)
      found = found || std::fabs(x - (mu + r - wmean)) < 1e-12;
    CHECK(found);
  }
}

TEST_CASE("GARCH-N estimation recovers simulated parameters (single seed)") {
  auto w = make_window(simulate_garch(0.0, 2e-6, 0.07, 0.90, 0.0, 5000, 17),
                       "5y");
  auto p = hist::calibrate_garch(w, hist::GarchVariant::Normal);
  CHECK(p.converged);
  CHECK(p.omega == doctest::Approx(2e-6).epsilon(0.5));
  CHECK(p.alpha == doctest::Approx(0.07).epsilon(0.5));
  CHECK(p.beta == doctest::Approx(0.90).epsilon(0.05));
  CHECK(p.alpha + p.beta < 1.0);
  CHECK(p.sigma2_0 > 0.0);
}

TEST_CASE("GJR estimation detects the leverage asymmetry") {
  auto w = make_window(
      simulate_garch(0.0, 2e-6, 0.02, 0.88, 0.12, 8000, 23), "5y");
  auto p = hist::calibrate_garch(w, hist::GarchVariant::Gjr);
  CHECK(p.converged);
  CHECK(p.gamma > 0.03);  // clearly positive leverage
  CHECK(p.alpha + p.beta + 0.5 * p.gamma < 1.0);
}

TEST_CASE("t dof estimate matches the kurtosis of a known t sample") {
  std::mt19937_64 rng(5);
  std::student_t_distribution<double> t8(8.0);
  std::vector<double> xs(40000);
  const double scale = std::sqrt(6.0 / 8.0);  // unit variance
  for (double& x : xs) x = t8(rng) * scale;
  const double d = hist::estimate_t_dof(xs);
  CHECK(d == doctest::Approx(8.0).epsilon(0.3));
  // Thin-tailed input is clamped to the near-Gaussian ceiling.
  std::vector<double> uni(5000);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double& x : uni) x = u(rng);
  CHECK(hist::estimate_t_dof(uni) == doctest::Approx(100.0));
}

TEST_CASE("scaled innovations are standardized under the fitted model") {
  auto w = make_window(simulate_garch(0.0, 2e-6, 0.07, 0.90, 0.0, 2000, 29),
                       "5y");
  auto p = hist::calibrate_garch(w, hist::GarchVariant::Normal);
  auto z = hist::scaled_innovations(w, p);
  REQUIRE(z.size() == w.returns.size());
  CHECK(stats::mean(z) == doctest::Approx(0.0).epsilon(0.1));
  CHECK(stats::stddev(z) == doctest::Approx(1.0).epsilon(0.08));
}

TEST_CASE("LN-HIS terminal distribution matches its closed form") {
  hist::SimInputs in;
  in.model = hist::HistModel::LnHis;
  in.mu = 0.0004;
  in.sigma_daily = 0.011;
  const int tau = 20, n = 100000;
  auto ps = hist::simulate_paths(in, 10000.0, tau, n, 7);
  REQUIRE(static_cast<int>(ps.terminal.size()) == n);
  std::vector<double> lr(ps.terminal.size());
  for (std::size_t i = 0; i < lr.size(); ++i)
    lr[i] = std::log(ps.terminal[i] / 10000.0);
  const double se = in.sigma_daily * std::sqrt(double(tau) / n);
  CHECK(std::fabs(stats::mean(lr) - in.mu * tau) < 4.0 * se);
  CHECK(stats::stddev(lr) ==
        doctest::Approx(in.sigma_daily * std::sqrt(double(tau))).epsilon(0.02));
}

TEST_CASE("path simulation is deterministic in the seed") {
  hist::SimInputs in;
  in.model = hist::HistModel::Bts;
  in.mu = 0.0;
  in.innovations = simulate_garch(0.0, 2e-6, 0.05, 0.9, 0.0, 126, 31);
  auto a = hist::simulate_paths(in, 100.0, 20, 20000, 5);
  auto b = hist::simulate_paths(in, 100.0, 20, 20000, 5);
  auto c = hist::simulate_paths(in, 100.0, 20, 20000, 6);
  CHECK(a.terminal == b.terminal);
  CHECK(a.terminal != c.terminal);
}

TEST_CASE("empirical density is a valid distribution and needs enough paths") {
  hist::SimInputs in;
  in.model = hist::HistModel::LnHis;
  in.mu = 0.0;
  in.sigma_daily = 0.012;
  auto ps = hist::simulate_paths(in, 10000.0, 20, 50000, 11);
  GridSpec grid;
  auto d = hist::empirical_density(ps, grid, Date(2016, 11, 18),
                                   Date(2016, 12, 16));
  CHECK(d.f_anchor == doctest::Approx(10000.0));
  for (std::size_t i = 1; i < d.cdf.size(); ++i) CHECK(d.cdf[i] >= d.cdf[i - 1]);
  CHECK(d.cdf.front() == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(d.cdf.back() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(d.pdf_integral() == doctest::Approx(1.0).epsilon(0.01));
  // The simulated law is lognormal; compare the CDF near the center.
  const double sd = in.sigma_daily * std::sqrt(20.0);
  for (double x : {-0.03, 0.0, 0.02})
    CHECK(d.cdf_at_log_return(x) ==
          doctest::Approx(stats::norm_cdf(x / sd)).epsilon(0.02));

  ps.terminal.resize(500);
  CHECK_THROWS_AS(hist::empirical_density(ps, grid, Date(2016, 11, 18),
                                          Date(2016, 12, 16)),
                  std::invalid_argument);
}

TEST_SUITE_END();
