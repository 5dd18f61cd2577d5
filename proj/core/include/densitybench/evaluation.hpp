#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "densitybench/dates.hpp"
#include "densitybench/density.hpp"

namespace dbench::eval {

struct TestResult {
  double statistic = 0.0;
  double p_value = 0.0;
  std::map<std::string, double> components;
};

struct PitSequence {
  std::vector<double> pits;   // clamped to [1e-6, 1 - 1e-6]
  std::vector<double> tpits;  // Phi^{-1}(pit)
  std::vector<Date> dates;

  void push(double raw_pit, Date date);
};

// Forecast CDF evaluated at the realized log-return, clamped away from 0/1.
double pit(const ForecastDensity& density, double realization);

// Exact-likelihood AR(1) fit of the T-PITs; LR against (mu, sigma^2, rho) =
// (0, 1, 0) with a chi-square(3) reference.
TestResult berkowitz_lr3(std::span<const double> tpits);

// JB = (N/6)(S^2 + (K-3)^2/4); p-value capped at 0.50.
TestResult jarque_bera(std::span<const double> tpits);

// One-sample KS against N(0,1), asymptotic Kolmogorov p-value.
TestResult ks_normal(std::span<const double> tpits);

double log_density_at(const ForecastDensity& density, double realization);
double log_score(std::span<const ForecastDensity> densities,
                 std::span<const double> realizations);

// Core return-based CRPS: sqrt of the squared CDF distance to the
// realization step function, trapezoid rule with an exact split at x_star.
double crps_from_cdf(std::span<const double> xs, std::span<const double> cdf,
                     double x_star);
double crps_rb(const ForecastDensity& density, double realization);

// IFS normalization. p-value tables are per model: {Berkowitz, JB, KS}.
std::vector<double> normalize_consistency(
    const std::vector<std::array<double, 3>>& p_values, double alpha = 0.05);
std::vector<double> normalize_gaussian(std::span<const double> values,
                                       bool higher_is_better);
double ifs(double consistency, double accuracy, double errors);

// Standalone score-tables pipeline (published-style inputs -> IFS report).
struct ScoreTableInput {
  std::string model;
  double p_berkowitz = 0.0;  // same units across rows (e.g. percent)
  double p_jb = 0.0;
  double p_ks = 0.0;
  double loglik = 0.0;  // higher is better
  double crps = 0.0;    // lower is better
};

struct IfsRow {
  std::string model;
  double consistency = 0.0, accuracy = 0.0, errors = 0.0, ifs = 0.0;
  int rank_consistency = 0, rank_accuracy = 0, rank_errors = 0, rank_ifs = 0;
};

std::vector<IfsRow> score_tables(const std::vector<ScoreTableInput>& rows,
                                 double alpha = 0.05);

}  // namespace dbench::eval
