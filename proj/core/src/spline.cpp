#include "densitybench/spline.hpp"

#include <algorithm>
#include <stdexcept>

namespace dbench {

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n)
    throw std::invalid_argument("spline needs >= 2 matching knots");
  for (std::size_t i = 1; i < n; ++i)
    if (x_[i] <= x_[i - 1])
      throw std::invalid_argument("spline knots must be strictly increasing");

  // Tridiagonal solve for natural end conditions (m_0 = m_{n-1} = 0).
  m_.assign(n, 0.0);
  if (n == 2) return;
  std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1];
    const double h1 = x_[i + 1] - x_[i];
    a[i] = h0;
    b[i] = 2.0 * (h0 + h1);
    c[i] = h1;
    d[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
  }
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    d[i] -= w * d[i - 1];
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = (d[i] - c[i] * m_[i + 1]) / b[i];
    if (i == 1) break;
  }
}

double CubicSpline::operator()(double x) const {
  if (x <= x_.front()) return y_.front();
  if (x >= x_.back()) return y_.back();
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double h = x_[i + 1] - x_[i];
  const double t = x - x_[i];
  const double u = x_[i + 1] - x;
  return (m_[i] * u * u * u + m_[i + 1] * t * t * t) / (6.0 * h) +
         (y_[i] / h - m_[i] * h / 6.0) * u +
         (y_[i + 1] / h - m_[i + 1] * h / 6.0) * t;
}

}  // namespace dbench
