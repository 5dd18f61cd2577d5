#include "densitybench/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dbench::optim {

Result nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                   std::vector<double> x0, NelderMeadOptions opts) {
  const std::size_t n = x0.size();
  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    double step = opts.init_step;
    if (simplex[i + 1][i] != 0.0)
      step = opts.init_step * std::max(1.0, std::abs(simplex[i + 1][i]));
    simplex[i + 1][i] += step;
  }
  for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(simplex[i]);

  auto order = [&] {
    std::vector<std::size_t> idx(n + 1);
    for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> s2;
    std::vector<double> f2;
    s2.reserve(n + 1);
    f2.reserve(n + 1);
    for (auto i : idx) {
      s2.push_back(simplex[i]);
      f2.push_back(fv[i]);
    }
    simplex = std::move(s2);
    fv = std::move(f2);
  };

  Result res;
  while (evals < opts.max_evals) {
    order();

    // Function spread is tested relative to the objective's magnitude so the
    // tolerance remains meaningful for large likelihood values.
    double fspread = std::abs(fv[n] - fv[0]);
    double diam = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      diam = std::max(diam, std::abs(simplex[n][i] - simplex[0][i]));
    if (fspread < opts.f_tol * (1.0 + std::abs(fv[0])) && diam < opts.x_tol) {
      res.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / n;

    auto combine = [&](double coef) {
      std::vector<double> p(n);
      for (std::size_t j = 0; j < n; ++j)
        p[j] = centroid[j] + coef * (centroid[j] - simplex[n][j]);
      return p;
    };

    auto xr = combine(alpha);
    double fr = eval(xr);
    if (fr < fv[0]) {
      auto xe = combine(gamma);
      double fe = eval(xe);
      if (fe < fr) {
        simplex[n] = std::move(xe);
        fv[n] = fe;
      } else {
        simplex[n] = std::move(xr);
        fv[n] = fr;
      }
    } else if (fr < fv[n - 1]) {
      simplex[n] = std::move(xr);
      fv[n] = fr;
    } else {
      auto xc = combine(fr < fv[n] ? rho : -rho);
      double fc = eval(xc);
      if (fc < std::min(fr, fv[n])) {
        simplex[n] = std::move(xc);
        fv[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t j = 0; j < n; ++j)
            simplex[i][j] = simplex[0][j] + sigma * (simplex[i][j] - simplex[0][j]);
          fv[i] = eval(simplex[i]);
        }
      }
    }
  }

  order();
  res.x = simplex[0];
  res.fx = fv[0];
  res.evals = evals;
  return res;
}

}  // namespace dbench::optim
