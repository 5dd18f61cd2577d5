#include "densitybench/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "densitybench/optim.hpp"
#include "densitybench/stats.hpp"

namespace dbench::eval {

namespace {
constexpr double kPitClamp = 1e-6;
constexpr double kPdfFloor = 1e-12;
}  // namespace

void PitSequence::push(double raw_pit, Date date) {
  const double p = std::clamp(raw_pit, kPitClamp, 1.0 - kPitClamp);
  pits.push_back(p);
  tpits.push_back(stats::norm_quantile(p));
  dates.push_back(date);
}

double pit(const ForecastDensity& density, double realization) {
  if (!(realization > 0.0))
    throw std::invalid_argument("pit: realization must be > 0");
  const double lr = std::log(realization / density.f_anchor);
  return std::clamp(density.cdf_at_log_return(lr), kPitClamp, 1.0 - kPitClamp);
}

TestResult berkowitz_lr3(std::span<const double> tpits) {
  const std::size_t n = tpits.size();
  if (n < 2) throw std::invalid_argument("berkowitz_lr3: sequence too short");
  const double sd = stats::stddev(tpits);
  // Guard with a relative threshold: a constant vector can carry a tiny
  // rounding-noise spread that is still degenerate for the AR(1) likelihood.
  if (!(sd > 1e-12 * std::max(1.0, std::abs(stats::mean(tpits)))))
    throw std::runtime_error("berkowitz_lr3: degenerate (constant) sequence");

  // Exact Gaussian AR(1) likelihood including the stationary first term;
  // sigma^2 is profiled out in closed form.
  auto exact_loglik = [&](double mu, double rho, double* sigma2_out) {
    double ss = 0.0;
    for (std::size_t t = 1; t < n; ++t) {
      const double e = tpits[t] - mu - rho * (tpits[t - 1] - mu);
      ss += e * e;
    }
    const double d0 = tpits[0] - mu;
    const double s2 = ((1.0 - rho * rho) * d0 * d0 + ss) / double(n);
    if (sigma2_out) *sigma2_out = s2;
    if (!(s2 > 0.0)) return -1e300;
    double ll = -0.5 * n * std::log(2.0 * M_PI) - 0.5 * n * std::log(s2) -
                0.5 * double(n);
    ll += 0.5 * std::log(1.0 - rho * rho);
    return ll;
  };

  // Start from the sample moments.
  const double m0 = stats::mean(tpits);
  double num = 0.0, den = 0.0;
  for (std::size_t t = 1; t < n; ++t) {
    num += (tpits[t] - m0) * (tpits[t - 1] - m0);
    den += (tpits[t - 1] - m0) * (tpits[t - 1] - m0);
  }
  const double rho0 = den > 0.0 ? std::clamp(num / den, -0.98, 0.98) : 0.0;

  auto objective = [&](const std::vector<double>& t) {
    const double rho = 0.999999 * std::tanh(t[1]);
    return -exact_loglik(t[0], rho, nullptr);
  };
  optim::NelderMeadOptions nm;
  nm.max_evals = 4000;
  nm.f_tol = 1e-12;
  nm.x_tol = 1e-10;
  nm.init_step = 0.1;
  auto r = optim::nelder_mead(objective, {m0, std::atanh(rho0)}, nm);

  const double mu_hat = r.x[0];
  const double rho_hat = 0.999999 * std::tanh(r.x[1]);
  double sigma2_hat = 0.0;
  const double l_unres = exact_loglik(mu_hat, rho_hat, &sigma2_hat);

  // Restricted model: iid N(0,1).
  double l_res = -0.5 * n * std::log(2.0 * M_PI);
  for (double x : tpits) l_res -= 0.5 * x * x;

  TestResult res;
  res.statistic = std::max(0.0, -2.0 * (l_res - l_unres));
  res.p_value = stats::chi2_sf(res.statistic, 3);
  res.components = {{"mu", mu_hat}, {"sigma2", sigma2_hat}, {"rho", rho_hat}};
  return res;
}

TestResult jarque_bera(std::span<const double> tpits) {
  const double n = static_cast<double>(tpits.size());
  const double s = stats::skewness(tpits);
  const double k = stats::kurtosis(tpits);
  TestResult res;
  res.statistic = (n / 6.0) * (s * s + 0.25 * (k - 3.0) * (k - 3.0));
  res.p_value = std::min(0.5, stats::chi2_sf(res.statistic, 2));
  res.components = {{"skewness", s}, {"kurtosis", k}};
  return res;
}

TestResult ks_normal(std::span<const double> tpits) {
  std::vector<double> xs(tpits.begin(), tpits.end());
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = stats::norm_cdf(xs[i]);
    d = std::max(d, std::max((i + 1) / n - f, f - i / n));
  }
  TestResult res;
  res.statistic = d;
  res.p_value = stats::kolmogorov_sf(std::sqrt(n) * d);
  return res;
}

double log_density_at(const ForecastDensity& density, double realization) {
  const double lr = std::log(realization / density.f_anchor);
  return std::log(std::max(density.pdf_at_log_return(lr), kPdfFloor));
}

double log_score(std::span<const ForecastDensity> densities,
                 std::span<const double> realizations) {
  if (densities.size() != realizations.size())
    throw std::invalid_argument("log_score: length mismatch");
  double l = 0.0;
  for (std::size_t i = 0; i < densities.size(); ++i)
    l += log_density_at(densities[i], realizations[i]);
  return l;
}

double crps_from_cdf(std::span<const double> xs, std::span<const double> cdf,
                     double x_star) {
  if (xs.size() != cdf.size() || xs.size() < 2)
    throw std::invalid_argument("crps_from_cdf: bad inputs");
  auto sq = [](double v) { return v * v; };
  double integral = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double a = xs[i - 1], b = xs[i];
    const double fa = cdf[i - 1], fb = cdf[i];
    if (b <= x_star) {
      integral += 0.5 * (sq(fa) + sq(fb)) * (b - a);
    } else if (a >= x_star) {
      integral += 0.5 * (sq(fa - 1.0) + sq(fb - 1.0)) * (b - a);
    } else {
      const double t = (x_star - a) / (b - a);
      const double fs = fa + t * (fb - fa);
      integral += 0.5 * (sq(fa) + sq(fs)) * (x_star - a);
      integral += 0.5 * (sq(fs - 1.0) + sq(fb - 1.0)) * (b - x_star);
    }
  }
  return std::sqrt(std::max(0.0, integral));
}

double crps_rb(const ForecastDensity& density, double realization) {
  // Simple-return coordinates: x = F / F_anchor - 1.
  std::vector<double> xs(density.x.size());
  for (std::size_t j = 0; j < xs.size(); ++j) xs[j] = std::expm1(density.x[j]);
  const double x_star = realization / density.f_anchor - 1.0;
  return crps_from_cdf(xs, density.cdf, x_star);
}

std::vector<double> normalize_consistency(
    const std::vector<std::array<double, 3>>& p_values, double alpha) {
  const std::size_t n = p_values.size();
  std::array<double, 3> pmin{}, pmax{};
  for (int t = 0; t < 3; ++t) {
    pmin[t] = p_values[0][t];
    pmax[t] = p_values[0][t];
    for (const auto& row : p_values) {
      pmin[t] = std::min(pmin[t], row[t]);
      pmax[t] = std::max(pmax[t], row[t]);
    }
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double score = 0.0;
    double pos_sum = 0.0;
    for (int t = 0; t < 3; ++t) {
      if (p_values[i][t] > alpha) score += 0.25;
      const double span = pmax[t] - pmin[t];
      pos_sum += span > 0.0 ? (p_values[i][t] - pmin[t]) / span : 1.0;
    }
    out[i] = score + 0.25 * pos_sum / 3.0;
  }
  return out;
}

std::vector<double> normalize_gaussian(std::span<const double> values,
                                       bool higher_is_better) {
  if (values.size() < 2)
    return std::vector<double>(values.size(), 0.5);
  const double m = stats::mean(values);
  const double s = stats::stddev(values);
  std::vector<double> out(values.size(), 0.5);
  if (!(s > 0.0)) return out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double z = (values[i] - m) / s;
    out[i] = stats::norm_cdf(higher_is_better ? z : -z);
  }
  return out;
}

double ifs(double consistency, double accuracy, double errors) {
  return (consistency + accuracy + errors) / 3.0;
}

std::vector<IfsRow> score_tables(const std::vector<ScoreTableInput>& rows,
                                 double alpha) {
  if (rows.empty()) return {};

  // Published tables quote p-values in percent; rescale when so.
  double pmax = 0.0;
  for (const auto& r : rows)
    pmax = std::max({pmax, r.p_berkowitz, r.p_jb, r.p_ks});
  const double scale = pmax > 1.0 ? 0.01 : 1.0;

  std::vector<std::array<double, 3>> pv;
  std::vector<double> lls, crpss;
  for (const auto& r : rows) {
    pv.push_back({r.p_berkowitz * scale, r.p_jb * scale, r.p_ks * scale});
    lls.push_back(r.loglik);
    crpss.push_back(r.crps);
  }
  auto cons = normalize_consistency(pv, alpha);
  auto acc = normalize_gaussian(lls, true);
  auto err = normalize_gaussian(crpss, false);

  std::vector<IfsRow> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out[i].model = rows[i].model;
    out[i].consistency = cons[i];
    out[i].accuracy = acc[i];
    out[i].errors = err[i];
    out[i].ifs = ifs(cons[i], acc[i], err[i]);
  }
  auto rank_by = [&](auto get, auto set) {
    std::vector<std::size_t> idx(out.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return get(out[a]) > get(out[b]);
    });
    for (std::size_t r = 0; r < idx.size(); ++r)
      set(out[idx[r]], static_cast<int>(r + 1));
  };
  rank_by([](const IfsRow& r) { return r.consistency; },
          [](IfsRow& r, int v) { r.rank_consistency = v; });
  rank_by([](const IfsRow& r) { return r.accuracy; },
          [](IfsRow& r, int v) { r.rank_accuracy = v; });
  rank_by([](const IfsRow& r) { return r.errors; },
          [](IfsRow& r, int v) { r.rank_errors = v; });
  rank_by([](const IfsRow& r) { return r.ifs; },
          [](IfsRow& r, int v) { r.rank_ifs = v; });
  return out;
}

}  // namespace dbench::eval
