#include "densitybench/backtest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "densitybench/stats.hpp"

namespace dbench::bt {

namespace {

constexpr const char* kModelNames[15] = {
    "LN-HIS(6m)", "LN-HIS(5y)", "BTS(6m)",     "BTS(5y)",     "GARCH-N(6m)",
    "GARCH-N(5y)", "GARCH-t(6m)", "GARCH-t(5y)", "GJR-FHS(6m)", "GJR-FHS(5y)",
    "LN-ATM",      "HESTON",      "BATES",       "VG",          "BL-MALZ"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

double quantile_sorted(const std::vector<double>& xs, double q) {
  if (xs.empty()) return 0.0;
  const double pos = q * (xs.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, xs.size() - 1);
  const double frac = pos - lo;
  return xs[lo] + frac * (xs[hi] - xs[lo]);
}

double autocorr1(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = stats::mean(xs);
  double num = 0.0, den = 0.0;
  for (std::size_t t = 0; t < xs.size(); ++t) {
    den += (xs[t] - m) * (xs[t] - m);
    if (t > 0) num += (xs[t] - m) * (xs[t - 1] - m);
  }
  return den > 0.0 ? num / den : 0.0;
}

// Grid quantile of the forecast, reported as a price.
double density_quantile(const ForecastDensity& d, double q) {
  auto it = std::lower_bound(d.cdf.begin(), d.cdf.end(), q);
  if (it == d.cdf.end()) return d.f_anchor * std::exp(d.x.back());
  const std::size_t j = static_cast<std::size_t>(it - d.cdf.begin());
  return d.f_anchor * std::exp(d.x[j]);
}

struct TaskOutput {
  CycleScore score;
  std::string audit_line;
};

int worker_count(int cfg_max) {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (cfg_max > 0) n = std::min(n, cfg_max);
  if (const char* env = std::getenv("DENSITYBENCH_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return std::max(1, n);
}

}  // namespace

std::string ModelSpec::name() const {
  if (family == Family::Historical) {
    switch (hist) {
      case hist::HistModel::LnHis: return "LN-HIS(" + window + ")";
      case hist::HistModel::Bts: return "BTS(" + window + ")";
      case hist::HistModel::GarchN: return "GARCH-N(" + window + ")";
      case hist::HistModel::GarchT: return "GARCH-t(" + window + ")";
      case hist::HistModel::GjrFhs: return "GJR-FHS(" + window + ")";
    }
  }
  switch (rnd) {
    case rnd::RndModel::LnAtm: return "LN-ATM";
    case rnd::RndModel::Heston: return "HESTON";
    case rnd::RndModel::Bates: return "BATES";
    case rnd::RndModel::Vg: return "VG";
    case rnd::RndModel::BlMalz: return "BL-MALZ";
  }
  throw std::logic_error("unreachable");
}

int ModelSpec::id() const {
  const std::string n = name();
  for (int i = 0; i < 15; ++i)
    if (n == kModelNames[i]) return i;
  throw std::logic_error("unknown model name " + n);
}

ModelSpec ModelSpec::parse(const std::string& name) {
  for (const auto& spec : full_roster())
    if (spec.name() == name) return spec;
  throw std::invalid_argument("unknown model name: " + name);
}

std::vector<ModelSpec> ModelSpec::full_roster() {
  std::vector<ModelSpec> out;
  const hist::HistModel hms[] = {hist::HistModel::LnHis, hist::HistModel::Bts,
                                 hist::HistModel::GarchN,
                                 hist::HistModel::GarchT,
                                 hist::HistModel::GjrFhs};
  for (auto hm : hms)
    for (const char* w : {"6m", "5y"}) {
      ModelSpec s;
      s.family = Family::Historical;
      s.hist = hm;
      s.window = w;
      out.push_back(s);
    }
  const rnd::RndModel rms[] = {rnd::RndModel::LnAtm, rnd::RndModel::Heston,
                               rnd::RndModel::Bates, rnd::RndModel::Vg,
                               rnd::RndModel::BlMalz};
  for (auto rm : rms) {
    ModelSpec s;
    s.family = Family::RiskNeutral;
    s.rnd = rm;
    out.push_back(s);
  }
  // Order the roster by canonical id so reductions are stable.
  std::sort(out.begin(), out.end(),
            [](const ModelSpec& a, const ModelSpec& b) { return a.id() < b.id(); });
  return out;
}

void BacktestConfig::validate() const {
  if (roster.empty()) throw std::invalid_argument("roster is empty");
  if (window_6m < 60 || window_5y < 60)
    throw std::invalid_argument("calibration windows too short");
  if (n_paths < 10000)
    throw std::invalid_argument("n_paths must be at least 10000");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0,1)");
  if (grid.n < 101 || !(grid.hi > grid.lo))
    throw std::invalid_argument("invalid grid");
}

std::vector<Cycle> build_schedule(
    const std::vector<Date>& expiries, const market::PriceHistory& history,
    const std::vector<market::CrossSection>& cross_sections,
    const std::vector<Date>& holidays,
    std::vector<std::string>* diagnostics) {
  std::vector<Cycle> out;
  for (Date expiry : expiries) {
    Cycle c;
    c.expiry = expiry;
    c.obs_date = expiry.plus_days(-28);
    const auto f = history.settle_on(c.obs_date);
    if (!f)
      throw std::runtime_error("no futures price on observation date " +
                               c.obs_date.to_iso());
    c.f_t = *f;
    const auto real = history.settle_on(expiry);
    if (!real) {
      if (diagnostics)
        diagnostics->push_back("cycle " + expiry.to_iso() +
                               " dropped: no settlement at expiry");
      continue;
    }
    c.realization = *real;
    c.tau_business = business_days_between(c.obs_date, expiry, holidays);
    for (std::size_t i = 0; i < cross_sections.size(); ++i)
      if (cross_sections[i].expiry == expiry &&
          cross_sections[i].obs_date == c.obs_date) {
        c.cs_index = static_cast<int>(i);
        break;
      }
    if (c.cs_index < 0) {
      if (diagnostics)
        diagnostics->push_back("cycle " + expiry.to_iso() +
                               " dropped: no option cross-section");
      continue;
    }
    out.push_back(c);
  }
  std::sort(out.begin(), out.end(),
            [](const Cycle& a, const Cycle& b) { return a.obs_date < b.obs_date; });
  return out;
}

namespace {

TaskOutput evaluate_model_cycle(const BacktestConfig& cfg,
                                const BacktestData& data, const Cycle& cyc,
                                const ModelSpec& spec) {
  TaskOutput out;
  out.score.obs_date = cyc.obs_date;
  nlohmann::ordered_json rec;
  rec["obs_date"] = cyc.obs_date.to_iso();
  rec["expiry"] = cyc.expiry.to_iso();
  rec["model"] = spec.name();

  try {
    ForecastDensity density;
    if (spec.family == ModelSpec::Family::Historical) {
      const int win = spec.window == "5y" ? cfg.window_5y : cfg.window_6m;
      auto rets = data.history.log_returns_up_to(cyc.obs_date);
      if (static_cast<int>(rets.size()) < win)
        throw std::runtime_error("insufficient history: need " +
                                 std::to_string(win) + " returns, have " +
                                 std::to_string(rets.size()));
      hist::ReturnWindow w;
      w.returns.assign(rets.end() - win, rets.end());
      w.label = spec.window;
      w.end_date = cyc.obs_date;
      w.validate(spec.window == "5y" ? 250u : 60u);

      hist::SimInputs in;
      in.model = spec.hist;
      switch (spec.hist) {
        case hist::HistModel::LnHis: {
          auto [mu, sd] = hist::calibrate_lognormal_hist(w);
          in.mu = mu;
          in.sigma_daily = sd;
          rec["params"] = {{"mu", mu}, {"sigma_daily", sd}};
          break;
        }
        case hist::HistModel::Bts: {
          in.mu = stats::mean(w.returns);
          in.innovations = w.returns;
          for (double& r : in.innovations) r -= in.mu;
          rec["params"] = {{"mu", in.mu}};
          break;
        }
        case hist::HistModel::GarchN:
        case hist::HistModel::GarchT:
        case hist::HistModel::GjrFhs: {
          const auto variant = spec.hist == hist::HistModel::GarchN
                                   ? hist::GarchVariant::Normal
                               : spec.hist == hist::HistModel::GarchT
                                   ? hist::GarchVariant::StudentT
                                   : hist::GarchVariant::Gjr;
          in.garch = hist::calibrate_garch(w, variant);
          if (!in.garch.converged)
            throw std::runtime_error("GARCH calibration did not converge");
          in.mu = in.garch.mu;
          if (spec.hist == hist::HistModel::GjrFhs)
            in.innovations = hist::scaled_innovations(w, in.garch);
          rec["params"] = {{"mu", in.garch.mu},       {"omega", in.garch.omega},
                           {"alpha", in.garch.alpha}, {"beta", in.garch.beta},
                           {"gamma", in.garch.gamma}, {"dof", in.garch.dof},
                           {"sigma2_0", in.garch.sigma2_0},
                           {"loglik", in.garch.loglik}};
          break;
        }
      }
      const std::uint64_t seed = stats::mix_seed(
          cfg.seed, static_cast<std::uint64_t>(spec.id()),
          static_cast<std::uint64_t>(cyc.obs_date.serial()));
      rec["seed"] = seed;
      auto ps = hist::simulate_paths(in, cyc.f_t, cyc.tau_business,
                                     cfg.n_paths, seed);
      density = hist::empirical_density(ps, cfg.grid, cyc.obs_date, cyc.expiry);
    } else {
      if (cyc.cs_index < 0)
        throw std::runtime_error("no option cross-section for this cycle");
      const auto& cs = data.cross_sections[cyc.cs_index];
      rnd::Horizon h;
      h.tau_vol = cyc.tau_business / 252.0;
      h.tau_disc = 28.0 / 360.0;
      switch (spec.rnd) {
        case rnd::RndModel::LnAtm: {
          const double sigma = rnd::atm_vol(cs, h);
          density = rnd::lognormal_rnd(cs.futures, sigma, h.tau_vol, cfg.grid,
                                       cyc.obs_date, cyc.expiry);
          rec["params"] = {{"sigma_atm", sigma}};
          break;
        }
        case rnd::RndModel::BlMalz: {
          double repair = 0.0;
          density = rnd::malz_rnd(cs, h, cfg.grid, &repair);
          rec["params"] = {{"cdf_repair", repair}};
          break;
        }
        default: {
          auto fit = rnd::calibrate_sre(spec.rnd, cs, h, cfg.calib);
          if (!fit.converged)
            throw std::runtime_error("SRE calibration did not converge");
          density = rnd::rnd_from_cf(spec.rnd, fit.params, cs.futures,
                                     h.tau_vol, cfg.grid, cyc.obs_date,
                                     cyc.expiry);
          rec["params"] = fit.params;
          rec["sre"] = fit.sre;
          rec["n_options"] = fit.n_options;
          break;
        }
      }
    }

    out.score.pit = eval::pit(density, cyc.realization);
    out.score.tpit = stats::norm_quantile(out.score.pit);
    out.score.log_density = eval::log_density_at(density, cyc.realization);
    out.score.crps = eval::crps_rb(density, cyc.realization);
    out.score.ok = true;

    rec["ok"] = true;
    rec["pit"] = out.score.pit;
    rec["log_density"] = out.score.log_density;
    rec["crps"] = out.score.crps;
    rec["q05"] = density_quantile(density, 0.05);
    rec["q50"] = density_quantile(density, 0.50);
    rec["q95"] = density_quantile(density, 0.95);
  } catch (const std::exception& e) {
    out.score.ok = false;
    out.score.error = e.what();
    rec["ok"] = false;
    rec["error"] = e.what();
  }
  out.audit_line = rec.dump();
  return out;
}

}  // namespace

BacktestResult run_backtest(const BacktestConfig& cfg,
                            const BacktestData& data) {
  cfg.validate();
  BacktestResult res;

  std::vector<Date> expiries;
  for (const auto& cs : data.cross_sections) expiries.push_back(cs.expiry);
  std::sort(expiries.begin(), expiries.end());
  expiries.erase(std::unique(expiries.begin(), expiries.end()),
                 expiries.end());
  auto cycles = build_schedule(expiries, data.history, data.cross_sections,
                               cfg.holidays, &res.diagnostics);
  if (cycles.empty()) throw std::runtime_error("no usable cycles in the data");

  // Roster ordered by canonical id for a stable reduction.
  std::vector<ModelSpec> roster = cfg.roster;
  std::sort(roster.begin(), roster.end(),
            [](const ModelSpec& a, const ModelSpec& b) { return a.id() < b.id(); });

  const std::size_t n_tasks = cycles.size() * roster.size();
  std::vector<TaskOutput> slots(n_tasks);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= n_tasks) return;
      const auto& cyc = cycles[k / roster.size()];
      const auto& spec = roster[k % roster.size()];
      slots[k] = evaluate_model_cycle(cfg, data, cyc, spec);
    }
  };
  const int n_workers =
      static_cast<int>(std::min<std::size_t>(worker_count(cfg.max_threads),
                                             n_tasks));
  if (n_workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  // Sequential reduction, ordered by date then model id.
  res.models.resize(roster.size());
  for (std::size_t m = 0; m < roster.size(); ++m)
    res.models[m].model = roster[m].name();
  for (std::size_t c = 0; c < cycles.size(); ++c)
    for (std::size_t m = 0; m < roster.size(); ++m) {
      const auto& t = slots[c * roster.size() + m];
      res.audit.push_back(t.audit_line);
      auto& rep = res.models[m];
      rep.cycles.push_back(t.score);
      if (!t.score.ok) {
        ++rep.n_excluded;
        continue;
      }
      ++rep.n_cycles;
      rep.pits.push_back(t.score.pit);
      rep.tpits.push_back(t.score.tpit);
      rep.loglik += t.score.log_density;
      rep.crps += t.score.crps;
      const bool pre = t.score.obs_date < cfg.split_date;
      (pre ? rep.loglik_pre : rep.loglik_post) += t.score.log_density;
      (pre ? rep.crps_pre : rep.crps_post) += t.score.crps;
      ++(pre ? rep.n_pre : rep.n_post);
    }

  for (auto& rep : res.models) {
    if (rep.n_cycles > 0) rep.crps /= rep.n_cycles;
    if (rep.n_pre > 0) rep.crps_pre /= rep.n_pre;
    if (rep.n_post > 0) rep.crps_post /= rep.n_post;
    if (rep.n_cycles >= 8) {
      rep.berkowitz = eval::berkowitz_lr3(rep.tpits);
      rep.jb = eval::jarque_bera(rep.tpits);
      rep.ks = eval::ks_normal(rep.tpits);
      rep.tests_computed = true;
    }
    if (!rep.tpits.empty()) {
      std::vector<double> sorted = rep.tpits;
      std::sort(sorted.begin(), sorted.end());
      rep.tpit_mean = stats::mean(rep.tpits);
      rep.tpit_p5 = quantile_sorted(sorted, 0.05);
      rep.tpit_median = quantile_sorted(sorted, 0.50);
      rep.tpit_p95 = quantile_sorted(sorted, 0.95);
      rep.tpit_std = stats::stddev(rep.tpits);
      rep.tpit_skew = stats::skewness(rep.tpits);
      rep.tpit_kurt = stats::kurtosis(rep.tpits);
      rep.tpit_ar1 = autocorr1(rep.tpits);
    }
  }

  // Excess columns relative to the simplest historical benchmark.
  int bench = -1;
  for (std::size_t m = 0; m < res.models.size(); ++m)
    if (res.models[m].model == "LN-HIS(6m)") bench = static_cast<int>(m);
  if (bench < 0) {
    bench = 0;
    res.benchmark_is_fallback = true;
  }
  res.benchmark = res.models[bench].model;
  for (auto& rep : res.models) {
    rep.excess_loglik = rep.loglik - res.models[bench].loglik;
    rep.excess_crps = rep.crps - res.models[bench].crps;
  }

  // Normalized scores over models with computed statistics.
  std::vector<std::size_t> scored;
  std::vector<std::array<double, 3>> pv;
  std::vector<double> lls, crpss;
  for (std::size_t m = 0; m < res.models.size(); ++m) {
    const auto& rep = res.models[m];
    if (!rep.tests_computed) continue;
    scored.push_back(m);
    pv.push_back({rep.berkowitz.p_value, rep.jb.p_value, rep.ks.p_value});
    lls.push_back(rep.loglik);
    crpss.push_back(rep.crps);
  }
  if (!scored.empty()) {
    auto cons = eval::normalize_consistency(pv, cfg.alpha);
    auto acc = eval::normalize_gaussian(lls, true);
    auto err = eval::normalize_gaussian(crpss, false);
    std::vector<eval::ScoreTableInput> rows;
    for (std::size_t i = 0; i < scored.size(); ++i) {
      auto& rep = res.models[scored[i]];
      rep.consistency = cons[i];
      rep.accuracy = acc[i];
      rep.errors = err[i];
      rep.ifs = eval::ifs(cons[i], acc[i], err[i]);
    }
    auto rank_by = [&](auto get, auto set) {
      std::vector<std::size_t> idx = scored;
      std::stable_sort(idx.begin(), idx.end(),
                       [&](std::size_t a, std::size_t b) {
                         return get(res.models[a]) > get(res.models[b]);
                       });
      for (std::size_t r = 0; r < idx.size(); ++r)
        set(res.models[idx[r]], static_cast<int>(r + 1));
    };
    rank_by([](const ModelReport& r) { return r.consistency; },
            [](ModelReport& r, int v) { r.rank_consistency = v; });
    rank_by([](const ModelReport& r) { return r.accuracy; },
            [](ModelReport& r, int v) { r.rank_accuracy = v; });
    rank_by([](const ModelReport& r) { return r.errors; },
            [](ModelReport& r, int v) { r.rank_errors = v; });
    rank_by([](const ModelReport& r) { return r.ifs; },
            [](ModelReport& r, int v) { r.rank_ifs = v; });
  }

  // ScoreBoard JSON. Deliberately no timestamps: byte-identical for equal
  // config + seed.
  nlohmann::ordered_json sb;
  sb["benchmark"] = res.benchmark;
  sb["benchmark_is_fallback"] = res.benchmark_is_fallback;
  sb["alpha"] = cfg.alpha;
  sb["split_date"] = cfg.split_date.to_iso();
  sb["n_cycles_total"] = cycles.size();
  sb["models"] = nlohmann::ordered_json::array();
  for (const auto& rep : res.models) {
    nlohmann::ordered_json j;
    j["name"] = rep.model;
    j["n_cycles"] = rep.n_cycles;
    j["n_excluded"] = rep.n_excluded;
    if (rep.tests_computed) {
      j["berkowitz"] = {{"statistic", rep.berkowitz.statistic},
                        {"p_value", rep.berkowitz.p_value},
                        {"mu", rep.berkowitz.components.at("mu")},
                        {"sigma2", rep.berkowitz.components.at("sigma2")},
                        {"rho", rep.berkowitz.components.at("rho")},
                        {"pass", rep.berkowitz.p_value > cfg.alpha}};
      j["jb"] = {{"statistic", rep.jb.statistic},
                 {"p_value", rep.jb.p_value},
                 {"pass", rep.jb.p_value > cfg.alpha}};
      j["ks"] = {{"statistic", rep.ks.statistic},
                 {"p_value", rep.ks.p_value},
                 {"pass", rep.ks.p_value > cfg.alpha}};
    }
    j["loglik"] = rep.loglik;
    j["excess_loglik"] = rep.excess_loglik;
    j["crps"] = rep.crps;
    j["excess_crps"] = rep.excess_crps;
    j["subperiods"] = {{"n_pre", rep.n_pre},
                       {"n_post", rep.n_post},
                       {"loglik_pre", rep.loglik_pre},
                       {"loglik_post", rep.loglik_post},
                       {"crps_pre", rep.crps_pre},
                       {"crps_post", rep.crps_post}};
    j["scores"] = {{"consistency", rep.consistency},
                   {"accuracy", rep.accuracy},
                   {"errors", rep.errors},
                   {"ifs", rep.ifs}};
    j["ranks"] = {{"consistency", rep.rank_consistency},
                  {"accuracy", rep.rank_accuracy},
                  {"errors", rep.rank_errors},
                  {"ifs", rep.rank_ifs}};
    sb["models"].push_back(std::move(j));
  }
  res.scoreboard = std::move(sb);
  return res;
}

std::string BacktestResult::consistency_table_csv() const {
  std::ostringstream os;
  os << "model,n_cycles,n_excluded,berkowitz_stat,berkowitz_p,jb_stat,jb_p,"
        "ks_stat,ks_p\n";
  for (const auto& r : models)
    os << r.model << ',' << r.n_cycles << ',' << r.n_excluded << ','
       << fmt(r.berkowitz.statistic) << ',' << fmt(r.berkowitz.p_value) << ','
       << fmt(r.jb.statistic) << ',' << fmt(r.jb.p_value) << ','
       << fmt(r.ks.statistic) << ',' << fmt(r.ks.p_value) << '\n';
  return os.str();
}

std::string BacktestResult::tpit_stats_csv() const {
  std::ostringstream os;
  os << "model,mean,p05,median,p95,std,skewness,kurtosis,ar1\n";
  for (const auto& r : models)
    os << r.model << ',' << fmt(r.tpit_mean) << ',' << fmt(r.tpit_p5) << ','
       << fmt(r.tpit_median) << ',' << fmt(r.tpit_p95) << ','
       << fmt(r.tpit_std) << ',' << fmt(r.tpit_skew) << ','
       << fmt(r.tpit_kurt) << ',' << fmt(r.tpit_ar1) << '\n';
  return os.str();
}

std::string BacktestResult::loglik_table_csv() const {
  std::ostringstream os;
  os << "model,n_cycles,loglik,excess_loglik_vs_" << benchmark
     << (benchmark_is_fallback ? "_fallback" : "")
     << ",loglik_pre,loglik_post\n";
  for (const auto& r : models)
    os << r.model << ',' << r.n_cycles << ',' << fmt(r.loglik) << ','
       << fmt(r.excess_loglik) << ',' << fmt(r.loglik_pre) << ','
       << fmt(r.loglik_post) << '\n';
  return os.str();
}

std::string BacktestResult::crps_table_csv() const {
  std::ostringstream os;
  os << "model,n_cycles,crps,excess_crps_vs_" << benchmark
     << (benchmark_is_fallback ? "_fallback" : "") << ",crps_pre,crps_post\n";
  for (const auto& r : models)
    os << r.model << ',' << r.n_cycles << ',' << fmt(r.crps) << ','
       << fmt(r.excess_crps) << ',' << fmt(r.crps_pre) << ','
       << fmt(r.crps_post) << '\n';
  return os.str();
}

std::string BacktestResult::ifs_table_csv() const {
  std::ostringstream os;
  os << "model,consistency,rank_consistency,accuracy,rank_accuracy,errors,"
        "rank_errors,ifs,rank_ifs\n";
  for (const auto& r : models)
    os << r.model << ',' << fmt(r.consistency) << ',' << r.rank_consistency
       << ',' << fmt(r.accuracy) << ',' << r.rank_accuracy << ','
       << fmt(r.errors) << ',' << r.rank_errors << ',' << fmt(r.ifs) << ','
       << r.rank_ifs << '\n';
  return os.str();
}

std::string BacktestResult::pit_hist_csv(int bins) const {
  std::ostringstream os;
  os << "model,bin_lo,bin_hi,count\n";
  for (const auto& r : models) {
    std::vector<int> counts(bins, 0);
    for (double p : r.pits) {
      int b = static_cast<int>(p * bins);
      b = std::clamp(b, 0, bins - 1);
      ++counts[b];
    }
    for (int b = 0; b < bins; ++b)
      os << r.model << ',' << fmt(double(b) / bins) << ','
         << fmt(double(b + 1) / bins) << ',' << counts[b] << '\n';
  }
  return os.str();
}

}  // namespace dbench::bt
