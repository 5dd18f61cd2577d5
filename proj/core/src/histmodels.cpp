#include "densitybench/histmodels.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "densitybench/optim.hpp"
#include "densitybench/stats.hpp"

namespace dbench::hist {

void ReturnWindow::validate(std::size_t min_len) const {
  if (returns.size() < min_len)
    throw std::invalid_argument("return window too short: " +
                                std::to_string(returns.size()));
  for (double r : returns)
    if (!std::isfinite(r))
      throw std::invalid_argument("non-finite return in window");
}

std::pair<double, double> calibrate_lognormal_hist(const ReturnWindow& w) {
  w.validate();
  const double mu = stats::mean(w.returns);
  const double sd = stats::stddev(w.returns);
  // Numerically zero spread (constant window up to rounding) is degenerate.
  if (!(sd > 1e-14 * std::max(1.0, std::abs(mu))))
    throw std::runtime_error("degenerate window: zero variance");
  return {mu, sd};
}

std::vector<double> bootstrap_draw(const ReturnWindow& w, double mu, int n,
                                   std::uint64_t seed) {
  w.validate(1);
  const double wmean = stats::mean(w.returns);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, w.returns.size() - 1);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (double& r : out) r = mu + (w.returns[pick(rng)] - wmean);
  return out;
}

namespace {

struct GarchDecoded {
  double omega, alpha, beta, gamma;
};

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Unconstrained coordinates -> positive params with alpha+beta+gamma/2 < 1.
GarchDecoded decode(const std::vector<double>& t, bool gjr) {
  GarchDecoded g{};
  g.omega = std::exp(t[0]);
  const double s = (1.0 - 1e-8) * sigmoid(t[1]);  // total persistence
  if (gjr) {
    const double e1 = std::exp(t[2]), e2 = std::exp(t[3]);
    const double z = e1 + e2 + 1.0;
    g.alpha = s * e1 / z;
    g.gamma = 2.0 * s * e2 / z;
    g.beta = s / z;
  } else {
    const double f = sigmoid(t[2]);
    g.alpha = s * f;
    g.beta = s * (1.0 - f);
    g.gamma = 0.0;
  }
  return g;
}

std::vector<double> encode(double omega, double alpha, double beta,
                           double gamma, bool gjr) {
  const double s = std::min(alpha + beta + 0.5 * gamma, 1.0 - 1e-6);
  auto logit = [](double p) {
    p = std::clamp(p, 1e-8, 1.0 - 1e-8);
    return std::log(p / (1.0 - p));
  };
  if (gjr) {
    const double fb = std::max(beta / s, 1e-8);
    return {std::log(omega), logit(s), std::log(std::max(alpha / s, 1e-8) / fb),
            std::log(std::max(0.5 * gamma / s, 1e-8) / fb)};
  }
  return {std::log(omega), logit(s), logit(std::clamp(alpha / s, 1e-8, 1.0 - 1e-8))};
}

// Quasi-log-likelihood of Eq-type form: sum of -ln(s2) - e^2/s2.
double garch_qll(std::span<const double> eps, double s2_init,
                 const GarchDecoded& g, bool gjr) {
  double s2 = s2_init;
  double ll = 0.0;
  for (double e : eps) {
    if (!(s2 > 0.0) || !std::isfinite(s2)) return -1e300;
    ll += -std::log(s2) - e * e / s2;
    s2 = g.omega + g.alpha * e * e + g.beta * s2 +
         (gjr && e < 0.0 ? g.gamma * e * e : 0.0);
  }
  return ll;
}

}  // namespace

GarchParams calibrate_garch(const ReturnWindow& w, GarchVariant variant) {
  const std::size_t min_len = (w.label == "5y") ? 250 : 100;
  w.validate(min_len);

  const bool gjr = (variant == GarchVariant::Gjr);
  const double mu = stats::mean(w.returns);
  const double var = stats::variance(w.returns);
  if (!(var > 0.0)) throw std::runtime_error("degenerate window: zero variance");

  std::vector<double> eps(w.returns.size());
  for (std::size_t i = 0; i < eps.size(); ++i) eps[i] = w.returns[i] - mu;

  auto objective = [&](const std::vector<double>& t) {
    return -garch_qll(eps, var, decode(t, gjr), gjr);
  };

  // Multi-start: method-of-moments style center plus seeded perturbations.
  std::mt19937_64 rng(0x6a5c4ULL);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<std::vector<double>> starts;
  starts.push_back(encode(var * 0.07, 0.05, 0.88, gjr ? 0.05 : 0.0, gjr));
  starts.push_back(encode(var * 0.02, 0.08, 0.90, gjr ? 0.02 : 0.0, gjr));
  for (int k = 0; k < 3; ++k) {
    auto t = starts[0];
    for (double& x : t) x += 0.8 * U(rng);
    starts.push_back(std::move(t));
  }

  optim::Result best;
  best.fx = 1e300;
  for (const auto& s0 : starts) {
    optim::NelderMeadOptions opts;
    opts.max_evals = 6000;
    opts.f_tol = 1e-9;
    auto r = optim::nelder_mead(objective, s0, opts);
    if (r.fx < best.fx) best = std::move(r);
  }
  // Polish from the winner with a tight simplex.
  {
    optim::NelderMeadOptions opts;
    opts.max_evals = 6000;
    opts.f_tol = 1e-12;
    opts.x_tol = 1e-10;
    opts.init_step = 0.02;
    auto r = optim::nelder_mead(objective, best.x, opts);
    if (r.fx <= best.fx) best = std::move(r);
  }

  GarchParams p;
  const auto g = decode(best.x, gjr);
  p.mu = mu;
  p.omega = g.omega;
  p.alpha = g.alpha;
  p.beta = g.beta;
  p.gamma = g.gamma;
  p.loglik = -best.fx;
  p.converged = best.converged;
  if (!p.converged && best.fx >= 1e299)
    throw std::runtime_error("GARCH optimizer failed to find a finite optimum");

  // Run the filter through the window to get the first out-of-sample
  // conditional variance.
  double s2 = var;
  for (double e : eps)
    s2 = p.omega + p.alpha * e * e + p.beta * s2 +
         (gjr && e < 0.0 ? p.gamma * e * e : 0.0);
  p.sigma2_0 = s2;

  if (variant == GarchVariant::StudentT) {
    auto z = scaled_innovations(w, p);
    p.dof = estimate_t_dof(z);
  }
  return p;
}

double estimate_t_dof(std::span<const double> scaled_residuals) {
  const double kappa = stats::kurtosis(scaled_residuals) - 3.0;
  if (kappa <= 0.0) return 100.0;
  return std::clamp(6.0 / kappa + 4.0, 4.01, 100.0);
}

std::vector<double> scaled_innovations(const ReturnWindow& w,
                                       const GarchParams& p) {
  std::vector<double> z(w.returns.size());
  double s2 = stats::variance(w.returns);
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double e = w.returns[i] - p.mu;
    z[i] = e / std::sqrt(s2);
    s2 = p.omega + p.alpha * e * e + p.beta * s2 +
         (e < 0.0 ? p.gamma * e * e : 0.0);
  }
  return z;
}

PathSet simulate_paths(const SimInputs& in, double f_t, int tau_days,
                       int n_paths, std::uint64_t seed) {
  if (!(f_t > 0.0) || tau_days < 1 || n_paths < 1)
    throw std::invalid_argument("simulate_paths: invalid inputs");

  PathSet ps;
  ps.f_anchor = f_t;
  ps.tau_days = tau_days;
  ps.seed = seed;
  ps.terminal.resize(static_cast<std::size_t>(n_paths));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);

  switch (in.model) {
    case HistModel::LnHis: {
      if (!(in.sigma_daily >= 0.0))
        throw std::invalid_argument("LN-HIS: sigma must be >= 0");
      const double drift = tau_days * in.mu;
      const double sd = in.sigma_daily * std::sqrt(double(tau_days));
      for (auto& f : ps.terminal) f = f_t * std::exp(drift + sd * N(rng));
      break;
    }
    case HistModel::Bts: {
      if (in.innovations.empty())
        throw std::invalid_argument("BTS: empty innovation pool");
      std::uniform_int_distribution<std::size_t> pick(0, in.innovations.size() - 1);
      for (auto& f : ps.terminal) {
        double lr = tau_days * in.mu;
        for (int d = 0; d < tau_days; ++d) lr += in.innovations[pick(rng)];
        f = f_t * std::exp(lr);
      }
      break;
    }
    case HistModel::GarchN:
    case HistModel::GarchT:
    case HistModel::GjrFhs: {
      const auto& p = in.garch;
      if (!(p.sigma2_0 > 0.0) || p.omega < 0.0 || p.alpha < 0.0 ||
          p.beta < 0.0 || p.gamma < 0.0)
        throw std::invalid_argument("GARCH simulation: invalid parameters");
      const bool gjr = (in.model == HistModel::GjrFhs);
      const bool student = (in.model == HistModel::GarchT);
      std::uniform_int_distribution<std::size_t> pick(
          0, in.innovations.empty() ? 0 : in.innovations.size() - 1);
      std::student_t_distribution<double> T(student ? p.dof : 5.0);
      const double tscale = student ? std::sqrt((p.dof - 2.0) / p.dof) : 1.0;
      if (gjr && in.innovations.empty())
        throw std::invalid_argument("GJR-FHS: empty innovation pool");
      for (auto& f : ps.terminal) {
        double lr = tau_days * p.mu;
        double s2 = p.sigma2_0;
        for (int d = 0; d < tau_days; ++d) {
          double z;
          if (gjr) z = in.innovations[pick(rng)];
          else if (student) z = tscale * T(rng);
          else z = N(rng);
          const double e = std::sqrt(s2) * z;
          lr += e;
          s2 = p.omega + p.alpha * e * e + p.beta * s2 +
               (gjr && e < 0.0 ? p.gamma * e * e : 0.0);
        }
        f = f_t * std::exp(lr);
      }
      break;
    }
  }
  return ps;
}

ForecastDensity empirical_density(const PathSet& ps, const GridSpec& grid,
                                  Date obs_date, Date expiry) {
  if (ps.terminal.size() < 10000)
    throw std::invalid_argument("empirical_density: need >= 10^4 paths");

  ForecastDensity d;
  d.grid = grid;
  d.x = grid.points();
  d.f_anchor = ps.f_anchor;
  d.obs_date = obs_date;
  d.expiry = expiry;

  std::vector<double> lr(ps.terminal.size());
  for (std::size_t i = 0; i < lr.size(); ++i)
    lr[i] = std::log(ps.terminal[i] / ps.f_anchor);
  std::sort(lr.begin(), lr.end());
  const double n = static_cast<double>(lr.size());

  // Midpoint-rank empirical CDF: (#{< x} + 0.5 #{== x}) / n.
  d.cdf.resize(d.x.size());
  for (std::size_t j = 0; j < d.x.size(); ++j) {
    const auto lo = std::lower_bound(lr.begin(), lr.end(), d.x[j]);
    const auto hi = std::upper_bound(lr.begin(), lr.end(), d.x[j]);
    d.cdf[j] = (static_cast<double>(lo - lr.begin()) +
                0.5 * static_cast<double>(hi - lo)) / n;
  }
  repair_cdf(d.cdf);

  // Gaussian KDE with Silverman bandwidth, computed by binning + discrete
  // convolution on the uniform grid.
  const double sd = stats::stddev(lr);
  double q25 = lr[static_cast<std::size_t>(0.25 * (n - 1))];
  double q75 = lr[static_cast<std::size_t>(0.75 * (n - 1))];
  const double iqr = q75 - q25;
  double h = 0.9 * std::min(sd, iqr > 0.0 ? iqr / 1.34 : sd) *
             std::pow(n, -0.2);
  const double dx = grid.dx();
  if (!(h > dx)) h = dx;  // degenerate samples: at least one-cell resolution

  std::vector<double> hist(d.x.size(), 0.0);
  for (double v : lr) {
    const double pos = (v - grid.lo) / dx;
    const long j = std::lround(pos);
    if (j >= 0 && j < static_cast<long>(hist.size())) hist[j] += 1.0;
  }
  const int half = static_cast<int>(std::ceil(5.0 * h / dx));
  std::vector<double> kernel(2 * half + 1);
  double ksum = 0.0;
  for (int k = -half; k <= half; ++k) {
    kernel[k + half] = std::exp(-0.5 * (k * dx / h) * (k * dx / h));
    ksum += kernel[k + half];
  }
  for (double& kv : kernel) kv /= (ksum * dx);

  d.pdf.assign(d.x.size(), 0.0);
  for (std::size_t j = 0; j < hist.size(); ++j) {
    if (hist[j] == 0.0) continue;
    const double wgt = hist[j] / n;
    const long lo = std::max<long>(0, static_cast<long>(j) - half);
    const long hi = std::min<long>(static_cast<long>(hist.size()) - 1,
                                   static_cast<long>(j) + half);
    for (long t = lo; t <= hi; ++t)
      d.pdf[static_cast<std::size_t>(t)] +=
          wgt * kernel[t - static_cast<long>(j) + half];
  }
  return d;
}

}  // namespace dbench::hist
