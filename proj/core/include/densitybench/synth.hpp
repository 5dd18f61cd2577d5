#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "densitybench/marketdata.hpp"
#include "densitybench/pricing.hpp"

namespace dbench::synth {

enum class WorldKind { Lognormal, Heston, GjrFhs };

struct GjrWorld {
  double mu = 0.0;  // daily mean log-return
  double omega = 2e-6;
  double alpha = 0.05;
  double beta = 0.88;
  double gamma = 0.08;
};

struct WorldParams {
  WorldKind kind = WorldKind::Lognormal;
  double sigma = 0.20;  // lognormal world, annualized
  pricing::HestonParams heston{2.0, 0.04, 0.3, -0.5, 0.04};
  GjrWorld gjr;
  double rate = 0.02;
  double f0 = 10000.0;
  double spread_frac = 0.005;   // half-spread as a fraction of mid
  double tick = 0.5;            // index points; floor for the full spread
  std::vector<double> strike_moneyness = {0.80, 0.84, 0.88, 0.92, 0.96, 1.00,
                                          1.04, 1.08, 1.12, 1.16, 1.20};
  void validate() const;
};

struct CycleTruth {
  Date obs_date;
  Date expiry;
  double futures = 0.0;
  double realization = 0.0;
  int tau_business = 0;
  double variance_state = 0.0;  // Heston v_t / GJR sigma^2_t at the obs date
};

struct Dataset {
  market::PriceHistory history;
  market::RateCurve rates;
  std::vector<market::RawOptionQuote> option_rows;
  std::vector<market::CrossSection> cross_sections;  // already filtered
  std::vector<CycleTruth> truth;
  WorldParams world;
};

// Deterministic in (params, n_cycles, seed). The generated history is long
// enough to support a 1260-business-day calibration window before the first
// observation date.
Dataset generate(const WorldParams& params, int n_cycles, std::uint64_t seed);

void write_csvs(const Dataset& ds, const std::string& out_dir);

}  // namespace dbench::synth
