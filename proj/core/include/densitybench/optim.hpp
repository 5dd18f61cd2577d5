#pragma once

#include <functional>
#include <vector>

namespace dbench::optim {

struct Result {
  std::vector<double> x;
  double fx = 0.0;
  int evals = 0;
  bool converged = false;
};

struct NelderMeadOptions {
  int max_evals = 20000;
  double f_tol = 1e-10;   // simplex function spread
  double x_tol = 1e-9;    // simplex diameter
  double init_step = 0.25;
};

// Minimizes f over unconstrained coordinates. Constraint handling is done by
// the caller through parameter transforms or by returning +inf from f.
Result nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                   std::vector<double> x0, NelderMeadOptions opts = {});

}  // namespace dbench::optim
