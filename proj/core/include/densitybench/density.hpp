#pragma once

#include <vector>

#include "densitybench/dates.hpp"

namespace dbench {

// Uniform mesh in log-return space, shared by all forecasting schemes so
// scores are computed in the same coordinates.
struct GridSpec {
  double lo = -1.5;
  double hi = 1.5;
  int n = 3001;

  double dx() const { return (hi - lo) / (n - 1); }
  std::vector<double> points() const;
};

// Discretized predictive distribution for the horizon price, anchored at the
// observation-date futures price: x = ln(F_horizon / f_anchor).
struct ForecastDensity {
  GridSpec grid;
  std::vector<double> x;    // log-return mesh
  std::vector<double> cdf;  // non-decreasing, in [0,1]
  std::vector<double> pdf;  // >= 0
  double f_anchor = 0.0;
  Date obs_date;
  Date expiry;

  double cdf_at_log_return(double lr) const;  // linear interpolation, clamped
  double pdf_at_log_return(double lr) const;
  double pdf_integral() const;  // trapezoid over the grid
  double mean_price() const;    // E[F_horizon] implied by the CDF
};

// Clamp to [0,1] and enforce monotonicity by a running maximum.
// Returns the total absolute adjustment applied.
double repair_cdf(std::vector<double>& cdf);

// Central-difference pdf from a monotone CDF on a uniform grid.
std::vector<double> pdf_from_cdf(const std::vector<double>& x,
                                 const std::vector<double>& cdf);

}  // namespace dbench
