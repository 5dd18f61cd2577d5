#pragma once

#include <vector>

namespace dbench {

// Natural cubic spline through strictly increasing knots, with flat
// extrapolation beyond the endpoints.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  std::size_t size() const { return x_.size(); }

 private:
  std::vector<double> x_, y_, m_;  // m_ = second derivatives at knots
};

}  // namespace dbench
