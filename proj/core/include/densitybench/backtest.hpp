#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "densitybench/dates.hpp"
#include "densitybench/density.hpp"
#include "densitybench/evaluation.hpp"
#include "densitybench/histmodels.hpp"
#include "densitybench/marketdata.hpp"
#include "densitybench/rndmodels.hpp"

namespace dbench::bt {

// One of the fifteen named schemes. Historical models carry a window label,
// risk-neutral models do not.
struct ModelSpec {
  enum class Family { Historical, RiskNeutral };
  Family family = Family::Historical;
  hist::HistModel hist = hist::HistModel::LnHis;
  std::string window;  // "6m" or "5y"
  rnd::RndModel rnd = rnd::RndModel::LnAtm;

  std::string name() const;
  int id() const;  // stable 0..14, used for seed mixing

  static ModelSpec parse(const std::string& name);
  static std::vector<ModelSpec> full_roster();
};

struct Cycle {
  Date obs_date;
  Date expiry;
  int tau_business = 0;
  double f_t = 0.0;
  double realization = 0.0;
  int cs_index = -1;  // into the cross-section list; -1 when none survived
};

struct BacktestConfig {
  std::vector<ModelSpec> roster;
  int window_6m = 126;
  int window_5y = 1260;
  int n_paths = 100000;
  std::uint64_t seed = 1;
  GridSpec grid;
  Date split_date{2007, 1, 1};
  double alpha = 0.05;
  rnd::CalibOptions calib;
  std::vector<Date> holidays;
  int max_threads = 0;  // 0 = hardware concurrency (DENSITYBENCH_THREADS caps)

  void validate() const;
};

struct BacktestData {
  market::PriceHistory history;
  market::RateCurve rates;
  std::vector<market::CrossSection> cross_sections;
};

// One Cycle per expiry whose observation date (expiry - 28 calendar days)
// has a futures settle. Cycles without a realized settlement are dropped
// with a diagnostic; a missing cross-section only disables risk-neutral
// models on that cycle.
std::vector<Cycle> build_schedule(
    const std::vector<Date>& expiries, const market::PriceHistory& history,
    const std::vector<market::CrossSection>& cross_sections,
    const std::vector<Date>& holidays = {},
    std::vector<std::string>* diagnostics = nullptr);

struct CycleScore {
  Date obs_date;
  bool ok = false;
  std::string error;
  double pit = 0.0;
  double tpit = 0.0;
  double log_density = 0.0;
  double crps = 0.0;
};

struct ModelReport {
  std::string model;
  int n_cycles = 0;    // cycles scored
  int n_excluded = 0;  // cycles dropped for this model
  eval::TestResult berkowitz, jb, ks;
  bool tests_computed = false;
  double loglik = 0.0, crps = 0.0;
  double excess_loglik = 0.0, excess_crps = 0.0;
  double loglik_pre = 0.0, loglik_post = 0.0;
  double crps_pre = 0.0, crps_post = 0.0;
  int n_pre = 0, n_post = 0;
  // T-PIT descriptive statistics
  double tpit_mean = 0.0, tpit_p5 = 0.0, tpit_median = 0.0, tpit_p95 = 0.0;
  double tpit_std = 0.0, tpit_skew = 0.0, tpit_kurt = 0.0, tpit_ar1 = 0.0;
  double consistency = 0.0, accuracy = 0.0, errors = 0.0, ifs = 0.0;
  int rank_consistency = 0, rank_accuracy = 0, rank_errors = 0, rank_ifs = 0;
  std::vector<double> pits, tpits;
  std::vector<CycleScore> cycles;
};

struct BacktestResult {
  std::vector<ModelReport> models;
  std::string benchmark;  // excess columns are relative to this model
  bool benchmark_is_fallback = false;
  std::vector<std::string> diagnostics;
  std::vector<std::string> audit;  // one JSON record per (cycle, model)
  nlohmann::ordered_json scoreboard;

  std::string consistency_table_csv() const;  // tests and p-values
  std::string tpit_stats_csv() const;         // descriptive T-PIT statistics
  std::string loglik_table_csv() const;       // log-likelihood and excess
  std::string crps_table_csv() const;         // CRPS and excess
  std::string ifs_table_csv() const;          // normalized scores and ranks
  std::string pit_hist_csv(int bins = 20) const;
};

BacktestResult run_backtest(const BacktestConfig& cfg,
                            const BacktestData& data);

}  // namespace dbench::bt
