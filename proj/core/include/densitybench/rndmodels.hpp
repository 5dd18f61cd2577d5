#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "densitybench/density.hpp"
#include "densitybench/marketdata.hpp"
#include "densitybench/pricing.hpp"

namespace dbench::rnd {

enum class RndModel { LnAtm, Heston, Bates, Vg, BlMalz };

struct SreFit {
  RndModel model = RndModel::Heston;
  std::vector<double> params;  // Heston: a,vbar,eta,rho,v0; Bates appends
                               // lambda,mu_j,nu_j; VG: sigma,nu,theta
  double sre = 0.0;
  int n_options = 0;
  std::vector<double> per_option_errors;
  bool converged = false;
};

struct CalibOptions {
  int n_starts = 8;
  int max_evals_per_start = 2500;
  std::uint64_t seed = 0x5a17ULL;  // fixed: calibration is deterministic
};

// Year fractions: tau_vol drives diffusion variance, tau_disc the act/360
// discounting (28 calendar days).
struct Horizon {
  double tau_vol = 0.0;
  double tau_disc = 0.0;
};

// ATM vol by linear interpolation of the two strikes bracketing F_t.
double atm_vol(const market::CrossSection& cs, const Horizon& h);

ForecastDensity lognormal_rnd(double F, double sigma, double tau_vol,
                              const GridSpec& grid, Date obs_date, Date expiry);

SreFit calibrate_sre(RndModel model, const market::CrossSection& cs,
                     const Horizon& h, const CalibOptions& opts = {});

pricing::CharFn make_cf(RndModel model, const std::vector<double>& params,
                        double F, double tau_vol);

ForecastDensity rnd_from_cf(RndModel model, const std::vector<double>& params,
                            double F, double tau_vol, const GridSpec& grid,
                            Date obs_date, Date expiry);

// Breeden-Litzenberger via the spline-in-vol construction; CDF by central
// finite difference of the call pricing function with step 0.01 * F.
ForecastDensity malz_rnd(const market::CrossSection& cs, const Horizon& h,
                         const GridSpec& grid, double* repair_total = nullptr);

}  // namespace dbench::rnd
