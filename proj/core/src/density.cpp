#include "densitybench/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dbench {

std::vector<double> GridSpec::points() const {
  if (n < 2) throw std::invalid_argument("grid needs >= 2 points");
  std::vector<double> xs(n);
  const double h = dx();
  for (int i = 0; i < n; ++i) xs[i] = lo + h * i;
  xs.back() = hi;
  return xs;
}

double ForecastDensity::cdf_at_log_return(double lr) const {
  if (lr <= x.front()) return cdf.front();
  if (lr >= x.back()) return cdf.back();
  const auto it = std::upper_bound(x.begin(), x.end(), lr);
  const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
  const double t = (lr - x[i]) / (x[i + 1] - x[i]);
  return cdf[i] + t * (cdf[i + 1] - cdf[i]);
}

double ForecastDensity::pdf_at_log_return(double lr) const {
  if (lr <= x.front() || lr >= x.back()) return 0.0;
  const auto it = std::upper_bound(x.begin(), x.end(), lr);
  const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
  const double t = (lr - x[i]) / (x[i + 1] - x[i]);
  return pdf[i] + t * (pdf[i + 1] - pdf[i]);
}

double ForecastDensity::pdf_integral() const {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i)
    s += 0.5 * (pdf[i] + pdf[i - 1]) * (x[i] - x[i - 1]);
  return s;
}

double ForecastDensity::mean_price() const {
  // Probability-mass summation over grid intervals, tail mass at endpoints.
  double s = cdf.front() * std::exp(x.front());
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double dm = cdf[i] - cdf[i - 1];
    s += dm * std::exp(0.5 * (x[i] + x[i - 1]));
  }
  s += (1.0 - cdf.back()) * std::exp(x.back());
  return f_anchor * s;
}

double repair_cdf(std::vector<double>& cdf) {
  double adjust = 0.0;
  double prev = 0.0;
  for (double& v : cdf) {
    double w = std::clamp(v, 0.0, 1.0);
    w = std::max(w, prev);
    adjust += std::abs(w - v);
    v = w;
    prev = w;
  }
  return adjust;
}

std::vector<double> pdf_from_cdf(const std::vector<double>& x,
                                 const std::vector<double>& cdf) {
  const std::size_t n = x.size();
  std::vector<double> pdf(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i)
    pdf[i] = std::max(0.0, (cdf[i + 1] - cdf[i - 1]) / (x[i + 1] - x[i - 1]));
  pdf[0] = std::max(0.0, (cdf[1] - cdf[0]) / (x[1] - x[0]));
  pdf[n - 1] = std::max(0.0, (cdf[n - 1] - cdf[n - 2]) / (x[n - 1] - x[n - 2]));
  return pdf;
}

}  // namespace dbench
