#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "densitybench/pricing.hpp"
#include "densitybench/stats.hpp"

using namespace dbench;
using pricing::OptionKind;

namespace {

// Independent normal CDF (erfc-based) so the Black-76 oracle does not share
// code with the library.
double phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double black76_oracle(double F, double K, double r, double tau, double sigma,
                      bool call) {
  const double sd = sigma * std::sqrt(tau);
  const double d1 = (std::log(F / K) + 0.5 * sd * sd) / sd;
  const double d2 = d1 - sd;
  const double df = std::exp(-r * tau);
  if (call) return df * (F * phi(d1) - K * phi(d2));
  return df * (K * phi(-d2) - F * phi(-d1));
}

}  // namespace

TEST_SUITE_BEGIN("pricing");

TEST_CASE("Black-76 against an independent implementation") {
  const double F = 10000.0, r = 0.02, tau = 28.0 / 252.0;
  for (double sigma : {0.1, 0.2, 0.45})
    for (double K : {8500.0, 9800.0, 10000.0, 10150.0, 11500.0}) {
      CHECK(pricing::black76_price(F, K, r, tau, sigma, OptionKind::Call) ==
            doctest::Approx(black76_oracle(F, K, r, tau, sigma, true))
                .epsilon(1e-10));
      CHECK(pricing::black76_price(F, K, r, tau, sigma, OptionKind::Put) ==
            doctest::Approx(black76_oracle(F, K, r, tau, sigma, false))
                .epsilon(1e-10));
    }
}

TEST_CASE("Black-76 put-call parity and degenerate vol") {
  const double F = 100.0, K = 95.0, r = 0.03, tau = 0.25, sigma = 0.3;
  const double c = pricing::black76_price(F, K, r, tau, sigma, OptionKind::Call);
  const double p = pricing::black76_price(F, K, r, tau, sigma, OptionKind::Put);
  CHECK(c - p == doctest::Approx(std::exp(-r * tau) * (F - K)).epsilon(1e-12));
  CHECK(pricing::black76_price(F, K, r, tau, 0.0, OptionKind::Call) ==
        doctest::Approx(std::exp(-r * tau) * (F - K)));
  CHECK_THROWS_AS(pricing::black76_price(F, K, r, 0.0, sigma, OptionKind::Call),
                  std::invalid_argument);
}

TEST_CASE("implied vol round trip") {
  const double F = 10000.0, r = 0.02, tau = 28.0 / 252.0;
  for (double sigma : {0.08, 0.2, 0.6})
    for (double K : {9000.0, 10000.0, 11000.0}) {
      const double price =
          pricing::black76_price(F, K, r, tau, sigma, OptionKind::Call);
      CHECK(pricing::black76_implied_vol(price, F, K, r, tau,
                                         OptionKind::Call) ==
            doctest::Approx(sigma).epsilon(1e-7));
    }
}

TEST_CASE("implied vol rejects prices outside no-arbitrage bounds") {
  const double F = 100.0, K = 90.0, r = 0.0, tau = 0.1;
  CHECK_THROWS_AS(
      pricing::black76_implied_vol(5.0, F, K, r, tau, OptionKind::Call),
      pricing::VolBoundsError);  // below intrinsic (10)
  CHECK_THROWS_AS(
      pricing::black76_implied_vol(101.0, F, K, r, tau, OptionKind::Call),
      pricing::VolBoundsError);  // above the forward
}

TEST_CASE("characteristic functions are bounded and match the forward") {
  const double F = 10000.0, tau = 28.0 / 252.0;
  const std::complex<double> mi(0.0, -1.0);

  pricing::HestonParams hp{2.0, 0.04, 0.3, -0.5, 0.05};
  pricing::BatesParams bp{hp, 0.8, -0.05, 0.15};
  pricing::VGParams vp{0.18, 0.4, -0.12};

  auto cfs = {pricing::cf_lognormal(F, 0.2, tau), pricing::cf_heston(hp, F, tau),
              pricing::cf_bates(bp, F, tau), pricing::cf_vg(vp, F, tau)};
  for (const auto& cf : cfs) {
    for (double w : {0.1, 1.0, 5.0, 25.0, 120.0})
      CHECK(std::abs(cf(w)) <= 1.0 + 1e-12);
    // Martingale normalization: psi(-i) = E[F_horizon] = F.
    CHECK(std::abs(cf(mi)) == doctest::Approx(F).epsilon(1e-9));
  }
}

TEST_CASE("vanishing vol-of-vol collapses Heston onto the lognormal CF") {
  const double F = 5000.0, tau = 0.2;
  pricing::HestonParams hp{1.5, 0.04, 1e-13, 0.0, 0.04};
  auto ch = pricing::cf_heston(hp, F, tau);
  auto cl = pricing::cf_lognormal(F, 0.2, tau);
  for (double w : {0.5, 2.0, 10.0, 40.0})
    CHECK(std::abs(ch(w) - cl(w)) < 1e-9);
}

TEST_CASE("VG feasibility constraint is enforced") {
  const pricing::VGParams infeasible{0.5, 3.0, 0.4};
  CHECK_THROWS_AS(infeasible.validate(), std::invalid_argument);
  const pricing::VGParams feasible{0.15, 0.3, -0.1};
  CHECK_NOTHROW(feasible.validate());
}

TEST_CASE("Fourier inversion of the lognormal CF hits the analytic CDF") {
  const double F = 10000.0, sigma = 0.25, tau = 28.0 / 252.0;
  const double sd = sigma * std::sqrt(tau);
  pricing::FourierInverter inv(pricing::cf_lognormal(F, sigma, tau));
  double max_err = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double x = F * std::exp(-0.4 + 0.8 * i / 49.0);
    const double analytic =
        phi((std::log(x / F) + 0.5 * sd * sd) / sd);
    max_err = std::max(max_err, std::fabs(inv.cdf(x) - analytic));
  }
  CHECK(max_err < 1e-6);
}

TEST_CASE("grid CDF recurrence agrees with pointwise inversion") {
  const double F = 10000.0;
  pricing::HestonParams hp{2.0, 0.04, 0.3, -0.5, 0.04};
  auto cf = pricing::cf_heston(hp, F, 28.0 / 252.0);
  pricing::FourierInverter inv(cf);
  std::vector<double> ln_xs;
  for (int i = 0; i <= 200; ++i)
    ln_xs.push_back(std::log(F) - 0.5 + i * 0.005);
  const auto grid_cdf = inv.cdf_ln_grid(ln_xs);
  for (std::size_t i = 0; i < ln_xs.size(); i += 17)
    CHECK(grid_cdf[i] ==
          doctest::Approx(inv.cdf(std::exp(ln_xs[i]))).epsilon(1e-9));
  for (std::size_t i = 1; i < grid_cdf.size(); ++i)
    CHECK(grid_cdf[i] >= grid_cdf[i - 1] - 1e-9);
}

TEST_CASE("CF call pricing matches Black-76 on the lognormal model") {
  const double F = 10000.0, r = 0.02, tau = 28.0 / 252.0, sigma = 0.2;
  auto cf = pricing::cf_lognormal(F, sigma, tau);
  for (int i = 0; i < 20; ++i) {
    const double K = F * (0.85 + 0.3 * i / 19.0);
    const double ref = black76_oracle(F, K, r, tau, sigma, true);
    CHECK(pricing::cf_call_price(cf, K, F, r, tau) ==
          doctest::Approx(ref).epsilon(1e-6));
  }
}

TEST_CASE("Heston call prices are arbitrage-free across strikes") {
  const double F = 10000.0, r = 0.02, tau = 28.0 / 252.0;
  pricing::HestonParams hp{2.0, 0.04, 0.4, -0.6, 0.05};
  pricing::CfPricer pricer(pricing::cf_heston(hp, F, tau), F, r, tau);
  std::vector<double> ks, cs;
  for (double m = 0.8; m <= 1.201; m += 0.02) ks.push_back(F * m);
  cs = pricer.calls(ks);
  const double df = std::exp(-r * tau);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    CHECK(cs[i] > std::max(0.0, df * (F - ks[i])) - 1e-9);
    CHECK(cs[i] < df * F);
    if (i > 0) CHECK(cs[i] < cs[i - 1]);  // monotone in strike
  }
  for (std::size_t i = 1; i + 1 < ks.size(); ++i)
    CHECK(cs[i - 1] - 2.0 * cs[i] + cs[i + 1] > -1e-8);  // convex
}

TEST_SUITE_END();
