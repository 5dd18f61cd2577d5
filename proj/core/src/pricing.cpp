#include "densitybench/pricing.hpp"

#include <algorithm>
#include <cmath>

#include "densitybench/stats.hpp"

namespace dbench::pricing {

using cplx = std::complex<double>;
constexpr cplx I{0.0, 1.0};

double black76_price(double F, double K, double r, double tau, double sigma,
                     OptionKind kind) {
  if (F < 0.0 || K < 0.0 || sigma < 0.0 || tau <= 0.0)
    throw std::invalid_argument("black76_price: invalid inputs");
  const double df = std::exp(-r * tau);
  const double sign = (kind == OptionKind::Call) ? 1.0 : -1.0;
  const double stdev = sigma * std::sqrt(tau);
  if (stdev <= 0.0 || K == 0.0 || F == 0.0)
    return df * std::max(sign * (F - K), 0.0);
  const double d1 = (std::log(F / K) + 0.5 * stdev * stdev) / stdev;
  const double d2 = d1 - stdev;
  return df * sign * (F * stats::norm_cdf(sign * d1) -
                      K * stats::norm_cdf(sign * d2));
}

double black76_implied_vol(double price, double F, double K, double r,
                           double tau, OptionKind kind) {
  const double df = std::exp(-r * tau);
  const double sign = (kind == OptionKind::Call) ? 1.0 : -1.0;
  const double intrinsic = df * std::max(sign * (F - K), 0.0);
  const double upper = df * (kind == OptionKind::Call ? F : K);
  if (price < intrinsic)
    throw VolBoundsError("option price below discounted intrinsic value",
                         intrinsic);
  if (price >= upper)
    throw VolBoundsError("option price at or above its upper bound", upper);

  double lo = 1e-6, hi = 5.0;
  double flo = black76_price(F, K, r, tau, lo, kind) - price;
  double fhi = black76_price(F, K, r, tau, hi, kind) - price;
  if (flo > 0.0) return lo;  // price indistinguishable from intrinsic
  if (fhi < 0.0) return hi;
  const double tol = 1e-10 * F;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = black76_price(F, K, r, tau, mid, kind) - price;
    if (std::abs(fm) < tol) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void HestonParams::validate() const {
  if (!(a >= 0.0) || !(vbar > 0.0) || !(eta >= 0.0) || !(v0 > 0.0) ||
      !(rho > -1.0 && rho < 1.0) || !std::isfinite(a + vbar + eta + rho + v0))
    throw std::invalid_argument("HestonParams out of admissible range");
}

void BatesParams::validate() const {
  heston.validate();
  if (!(lambda >= 0.0) || !(nu_j >= 0.0) || !(mu_j > -1.0))
    throw std::invalid_argument("BatesParams out of admissible range");
}

void VGParams::validate() const {
  if (!(sigma > 0.0) || !(nu > 0.0) || !std::isfinite(theta))
    throw std::invalid_argument("VGParams out of admissible range");
  if (!(1.0 / nu > theta + 0.5 * sigma * sigma))
    throw std::invalid_argument("VG feasibility 1/nu > theta + sigma^2/2 violated");
}

CharFn cf_lognormal(double F, double sigma, double tau) {
  const double lnF = std::log(F);
  const double v = sigma * sigma * tau;
  return [lnF, v](cplx w) {
    return std::exp(I * w * (lnF - 0.5 * v) - 0.5 * w * w * v);
  };
}

CharFn cf_heston(const HestonParams& p, double F, double tau) {
  p.validate();
  const double lnF = std::log(F);
  if (p.eta < 1e-12) {
    // Deterministic integrated variance limit.
    double iv;
    if (p.a < 1e-12)
      iv = p.v0 * tau;
    else
      iv = p.vbar * tau + (p.v0 - p.vbar) * (1.0 - std::exp(-p.a * tau)) / p.a;
    return [lnF, iv](cplx w) {
      return std::exp(I * w * lnF - 0.5 * (I * w + w * w) * iv);
    };
  }
  const double a = p.a, vbar = p.vbar, eta = p.eta, rho = p.rho, v0 = p.v0;
  // Branch-cut-free ("little trap") formulation.
  return [=](cplx w) {
    const cplx beta = a - I * rho * eta * w;
    const cplx d = std::sqrt(beta * beta + eta * eta * (I * w + w * w));
    const cplx g = (beta - d) / (beta + d);
    const cplx edt = std::exp(-d * tau);
    const cplx A = (a * vbar / (eta * eta)) *
                   ((beta - d) * tau - 2.0 * std::log((1.0 - g * edt) / (1.0 - g)));
    const cplx B = ((beta - d) / (eta * eta)) * (1.0 - edt) / (1.0 - g * edt);
    return std::exp(I * w * lnF + A + B * v0);
  };
}

CharFn cf_bates(const BatesParams& p, double F, double tau) {
  p.validate();
  CharFn base = cf_heston(p.heston, F, tau);
  const double lambda = p.lambda, mu_j = p.mu_j, nu_j = p.nu_j;
  if (lambda == 0.0) return base;
  const double ln1mu = std::log(1.0 + mu_j);
  return [=](cplx w) {
    // Lognormal jumps with compensator -lambda * mu_j per unit time.
    const cplx jump = std::exp(I * w * ln1mu +
                               0.5 * nu_j * nu_j * I * w * (I * w - 1.0)) - 1.0;
    return base(w) * std::exp(tau * lambda * (jump - I * w * mu_j));
  };
}

CharFn cf_vg(const VGParams& p, double F, double tau) {
  p.validate();
  const double lnF = std::log(F);
  const double omega =
      std::log(1.0 - p.theta * p.nu - 0.5 * p.sigma * p.sigma * p.nu) / p.nu;
  const double sigma = p.sigma, nu = p.nu, theta = p.theta;
  return [=](cplx w) {
    const cplx denom = 1.0 - I * theta * nu * w + 0.5 * sigma * sigma * nu * w * w;
    return std::exp(I * w * (lnF + omega * tau)) * std::pow(denom, -tau / nu);
  };
}

namespace {

// 16-point Gauss-Legendre abscissae/weights on [-1, 1].
constexpr double kGL16X[8] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr double kGL16W[8] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

}  // namespace

FourierInverter::FourierInverter(const CharFn& cf, double w_max_cap,
                                 double panel_width) {
  // Truncation point: |psi(w)| / w below tolerance, capped.
  double W = 5.0;
  while (W < w_max_cap && std::abs(cf(W)) / W > 1e-10) W *= 2.0;
  w_max_ = std::min(W, w_max_cap);

  // Composite panels sized against the oscillation scale of the integrand
  // (|ln K - ln F| stays below ~1.5 in this toolkit).
  const double panel = std::min(panel_width, w_max_ / 20.0);
  const int n_panels = static_cast<int>(std::ceil(w_max_ / panel));
  nodes_.reserve(16 * n_panels);
  weights_.reserve(16 * n_panels);
  for (int p = 0; p < n_panels; ++p) {
    const double a = p * panel;
    const double b = std::min(w_max_, a + panel);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int k = 0; k < 8; ++k) {
      nodes_.push_back(c - h * kGL16X[k]);
      weights_.push_back(h * kGL16W[k]);
      nodes_.push_back(c + h * kGL16X[k]);
      weights_.push_back(h * kGL16W[k]);
    }
  }
  psi_.resize(nodes_.size());
  for (std::size_t k = 0; k < nodes_.size(); ++k) psi_[k] = cf(nodes_[k]);
}

double FourierInverter::tail_prob(double ln_x) const {
  double s = 0.0;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const double u = nodes_[k];
    const cplx e = std::exp(cplx(0.0, -u * ln_x));
    s += weights_[k] * std::imag(e * psi_[k]) / u;
  }
  return 0.5 + s / M_PI;
}

double FourierInverter::cdf(double x) const {
  if (!(x > 0.0)) throw std::invalid_argument("cdf: x must be positive");
  return std::clamp(1.0 - tail_prob(std::log(x)), 0.0, 1.0);
}

std::vector<double> FourierInverter::cdf_ln_grid(
    const std::vector<double>& ln_xs) const {
  std::vector<double> out(ln_xs.size(), 0.0);
  if (ln_xs.empty()) return out;
  const double x0 = ln_xs.front();
  const double dx = ln_xs.size() > 1 ? ln_xs[1] - ln_xs[0] : 0.0;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const double u = nodes_[k];
    const double wu = weights_[k] / u;
    const cplx step = std::exp(cplx(0.0, -u * dx));
    cplx e = std::exp(cplx(0.0, -u * x0)) * psi_[k];
    for (std::size_t j = 0; j < ln_xs.size(); ++j) {
      out[j] += wu * std::imag(e);
      e *= step;
    }
  }
  for (double& v : out) v = std::clamp(1.0 - (0.5 + v / M_PI), 0.0, 1.0);
  return out;
}

double cf_to_cdf(const CharFn& cf, double x) {
  return FourierInverter(cf).cdf(x);
}

CfPricer::CfPricer(const CharFn& cf, double F, double r, double tau,
                   double panel_width)
    : p2_(cf, 2000.0, panel_width),
      p1_([&cf] {
        const cplx norm = cf(-I);
        return CharFn([cf, norm](cplx w) { return cf(w - I) / norm; });
      }(), 2000.0, panel_width),
      F_(F),
      r_(r),
      tau_(tau) {}

double CfPricer::call(double K) const {
  const double lnK = std::log(K);
  const double P1 = std::clamp(p1_.tail_prob(lnK), 0.0, 1.0);
  const double P2 = std::clamp(p2_.tail_prob(lnK), 0.0, 1.0);
  return std::exp(-r_ * tau_) * (F_ * P1 - K * P2);
}

std::vector<double> CfPricer::calls(std::span<const double> strikes) const {
  std::vector<double> out;
  out.reserve(strikes.size());
  for (double K : strikes) out.push_back(call(K));
  return out;
}

double cf_call_price(const CharFn& cf, double K, double F, double r,
                     double tau) {
  if (!(K > 0.0)) throw std::invalid_argument("cf_call_price: K must be > 0");
  return CfPricer(cf, F, r, tau).call(K);
}

}  // namespace dbench::pricing
