#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "densitybench/dates.hpp"
#include "densitybench/density.hpp"

namespace dbench::hist {

struct ReturnWindow {
  std::vector<double> returns;  // daily log-returns, oldest first
  std::string label;            // "6m" or "5y"
  Date end_date;                // observation date (strictly ex-ante)

  void validate(std::size_t min_len = 60) const;
};

enum class GarchVariant { Normal, StudentT, Gjr };

struct GarchParams {
  double mu = 0.0;
  double omega = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;     // GJR leverage; 0 for plain GARCH
  double dof = 0.0;       // Student's t only
  double sigma2_0 = 0.0;  // conditional variance for the first forecast day
  double loglik = 0.0;    // achieved quasi-log-likelihood
  bool converged = false;
};

enum class HistModel { LnHis, Bts, GarchN, GarchT, GjrFhs };

struct PathSet {
  std::vector<double> terminal;  // terminal prices
  double f_anchor = 0.0;
  int tau_days = 0;
  std::uint64_t seed = 0;
};

// Sample mean and sample (N-1) std of the window returns.
std::pair<double, double> calibrate_lognormal_hist(const ReturnWindow& w);

// Bootstrap of past returns: mu + z with z resampled from the demeaned
// window, uniformly with replacement.
std::vector<double> bootstrap_draw(const ReturnWindow& w, double mu, int n,
                                   std::uint64_t seed);

// Gaussian QMLE of the GARCH(1,1) / GJR-GARCH(1,1) parameters, Nelder-Mead
// on unconstrained transforms with multi-starts. For the Student-t variant
// the dof is estimated afterwards from the scaled residuals.
GarchParams calibrate_garch(const ReturnWindow& w, GarchVariant variant);

// dof matching the residual excess kurtosis: d = 6/kappa + 4, clamped.
double estimate_t_dof(std::span<const double> scaled_residuals);

// In-sample standardized residuals e_j / sigma_j under the fitted params.
std::vector<double> scaled_innovations(const ReturnWindow& w,
                                       const GarchParams& p);

struct SimInputs {
  HistModel model = HistModel::LnHis;
  double mu = 0.0;           // daily mean log-return
  double sigma_daily = 0.0;  // LN-HIS
  GarchParams garch;         // GARCH variants
  std::vector<double> innovations;  // demeaned returns (BTS) or scaled
                                    // residuals (GJR-FHS)
};

PathSet simulate_paths(const SimInputs& in, double f_t, int tau_days,
                       int n_paths, std::uint64_t seed);

// Empirical CDF (midpoint-rank, linearly interpolated) plus a Gaussian KDE
// pdf with Silverman bandwidth, on the common log-return grid.
ForecastDensity empirical_density(const PathSet& ps, const GridSpec& grid,
                                  Date obs_date, Date expiry);

}  // namespace dbench::hist
