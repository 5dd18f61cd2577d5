#pragma once

#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace dbench::pricing {

enum class OptionKind { Call, Put };

double black76_price(double F, double K, double r, double tau, double sigma,
                     OptionKind kind);

struct VolBoundsError : std::runtime_error {
  VolBoundsError(const std::string& what, double bound)
      : std::runtime_error(what), violated_bound(bound) {}
  double violated_bound;
};

// Bracketed root-find on [1e-6, 5]; throws VolBoundsError when the price
// falls outside the no-arbitrage band.
double black76_implied_vol(double price, double F, double K, double r,
                           double tau, OptionKind kind);

struct HestonParams {
  double a = 0.0;    // mean-reversion speed
  double vbar = 0.0; // long-run variance
  double eta = 0.0;  // vol of vol
  double rho = 0.0;  // correlation
  double v0 = 0.0;   // initial variance
  void validate() const;
};

struct BatesParams {
  HestonParams heston;
  double lambda = 0.0;  // jump intensity per year
  double mu_j = 0.0;    // mean jump size
  double nu_j = 0.0;    // jump-size std
  void validate() const;
};

struct VGParams {
  double sigma = 0.0;
  double nu = 0.0;
  double theta = 0.0;
  void validate() const;  // includes 1/nu > theta + sigma^2/2
};

// Characteristic function of ln(F_horizon), evaluated at complex frequency.
using CharFn = std::function<std::complex<double>(std::complex<double>)>;

CharFn cf_lognormal(double F, double sigma, double tau);
CharFn cf_heston(const HestonParams& p, double F, double tau);
CharFn cf_bates(const BatesParams& p, double F, double tau);
CharFn cf_vg(const VGParams& p, double F, double tau);

// Gauss-Legendre quadrature of the Gil-Pelaez inversion integral. The node
// set and the CF values at the nodes are precomputed once so that many
// strikes / grid points can reuse them.
class FourierInverter {
 public:
  explicit FourierInverter(const CharFn& cf, double w_max_cap = 2000.0,
                           double panel_width = 1.0);

  double tail_prob(double ln_x) const;             // P(ln F_horizon > ln_x)
  double cdf(double x) const;                      // x is a price > 0
  std::vector<double> cdf_ln_grid(const std::vector<double>& ln_xs) const;

  double w_max() const { return w_max_; }

 private:
  std::vector<double> nodes_, weights_;
  std::vector<std::complex<double>> psi_;
  double w_max_ = 0.0;
};

// Single-shot inversion helper.
double cf_to_cdf(const CharFn& cf, double x);

// Undiscounted forward probabilities assembled into a discounted call price.
class CfPricer {
 public:
  // Wider quadrature panels are acceptable inside calibration loops where
  // strikes stay close to the forward.
  CfPricer(const CharFn& cf, double F, double r, double tau,
           double panel_width = 1.0);
  double call(double K) const;
  std::vector<double> calls(std::span<const double> strikes) const;

 private:
  FourierInverter p2_;  // measure of ln F*
  FourierInverter p1_;  // share measure: psi(u - i) / psi(-i)
  double F_, r_, tau_;
};

double cf_call_price(const CharFn& cf, double K, double F, double r,
                     double tau);

}  // namespace dbench::pricing
