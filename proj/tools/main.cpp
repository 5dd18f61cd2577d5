// densitybench command line driver.
//
// Subcommands:
//   synth          generate a synthetic futures/options dataset
//   backtest       run the full density-forecast backtest
//   score-tables   compute normalized scores + IFS from published-style CSVs
//   validate-data  load and sanity-check a dataset without running anything
//
// Exit codes: 0 success, 1 validation error, 2 runtime failure.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "densitybench/backtest.hpp"
#include "densitybench/csvio.hpp"
#include "densitybench/evaluation.hpp"
#include "densitybench/marketdata.hpp"
#include "densitybench/stats.hpp"
#include "densitybench/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const std::string& path, const std::string& content) {
  fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

std::string hex_digest(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)v);
  return buf;
}

// Flat key=value config file; '#' starts a comment, blank lines ignored.
std::map<std::string, std::string> parse_config(const std::string& path) {
  std::map<std::string, std::string> out;
  std::istringstream in(slurp(path));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError(path + ":" + std::to_string(lineno) +
                            ": expected key=value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ','))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

// ---------------------------------------------------------------- synth ----

int cmd_synth(const std::string& world, int cycles, std::uint64_t seed,
              const std::string& out_dir, double sigma, double rate,
              double f0) {
  dbench::synth::WorldParams wp;
  if (world == "lognormal")
    wp.kind = dbench::synth::WorldKind::Lognormal;
  else if (world == "heston")
    wp.kind = dbench::synth::WorldKind::Heston;
  else if (world == "gjr")
    wp.kind = dbench::synth::WorldKind::GjrFhs;
  else
    throw ValidationError("unknown world: " + world);
  if (cycles <= 0) throw ValidationError("--cycles must be positive");
  wp.sigma = sigma;
  wp.rate = rate;
  wp.f0 = f0;
  wp.validate();

  auto ds = dbench::synth::generate(wp, cycles, seed);
  fs::create_directories(out_dir);
  dbench::synth::write_csvs(ds, out_dir);
  std::cout << "wrote " << ds.truth.size() << " cycles to " << out_dir
            << std::endl;
  return 0;
}

// ------------------------------------------------------------- backtest ----

struct BacktestCli {
  std::string config_path;
  std::string futures, rates, options, out_dir = "out";
  std::string roster = "all";
  int window_6m = 126, window_5y = 1260;
  int n_paths = 100000;
  std::uint64_t seed = 1;
  double alpha = 0.05;
  std::string split_date = "2007-01-01";
  double grid_lo = -1.5, grid_hi = 1.5;
  int grid_n = 3001;
  int threads = 0;
  int sre_starts = 8;
  std::string holidays;  // comma-separated ISO dates
};

void apply_config_file(BacktestCli& c, const std::string& path,
                       const CLI::App* sub) {
  const auto kv = parse_config(path);
  auto flag_set = [&](const std::string& flag) {
    return sub->count("--" + flag) > 0;
  };
  auto get = [&](const char* key, auto& field, const char* flag) {
    auto it = kv.find(key);
    if (it == kv.end() || flag_set(flag)) return;
    std::istringstream in(it->second);
    in >> field;
    if (in.fail()) throw ValidationError(std::string("bad value for ") + key);
  };
  auto gets = [&](const char* key, std::string& field, const char* flag) {
    auto it = kv.find(key);
    if (it != kv.end() && !flag_set(flag)) field = it->second;
  };
  gets("futures", c.futures, "futures");
  gets("rates", c.rates, "rates");
  gets("options", c.options, "options");
  gets("out", c.out_dir, "out");
  gets("roster", c.roster, "roster");
  gets("split_date", c.split_date, "split-date");
  gets("holidays", c.holidays, "holidays");
  get("window_6m", c.window_6m, "window-6m");
  get("window_5y", c.window_5y, "window-5y");
  get("n_paths", c.n_paths, "n-paths");
  get("seed", c.seed, "seed");
  get("alpha", c.alpha, "alpha");
  get("grid_lo", c.grid_lo, "grid-lo");
  get("grid_hi", c.grid_hi, "grid-hi");
  get("grid_n", c.grid_n, "grid-n");
  get("threads", c.threads, "threads");
  get("sre_starts", c.sre_starts, "sre-starts");
  const char* known[] = {"futures",  "rates",    "options",   "out",
                         "roster",   "split_date", "holidays", "window_6m",
                         "window_5y", "n_paths",  "seed",      "alpha",
                         "grid_lo",  "grid_hi",  "grid_n",    "threads",
                         "sre_starts"};
  for (const auto& [k, v] : kv) {
    bool ok = false;
    for (const char* key : known) ok = ok || k == key;
    if (!ok) throw ValidationError("unknown config key: " + k);
  }
}

int cmd_backtest(BacktestCli& c, const CLI::App* sub) {
  if (!c.config_path.empty()) apply_config_file(c, c.config_path, sub);
  if (c.futures.empty() || c.rates.empty() || c.options.empty())
    throw ValidationError("futures, rates and options paths are required");

  dbench::bt::BacktestConfig cfg;
  if (c.roster == "all") {
    cfg.roster = dbench::bt::ModelSpec::full_roster();
  } else {
    for (const auto& name : split_commas(c.roster)) {
      try {
        cfg.roster.push_back(dbench::bt::ModelSpec::parse(name));
      } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
      }
    }
  }
  cfg.window_6m = c.window_6m;
  cfg.window_5y = c.window_5y;
  cfg.n_paths = c.n_paths;
  cfg.seed = c.seed;
  cfg.alpha = c.alpha;
  cfg.split_date = dbench::Date::from_iso(c.split_date);
  cfg.grid = {c.grid_lo, c.grid_hi, c.grid_n};
  cfg.max_threads = c.threads;
  cfg.calib.n_starts = c.sre_starts;
  for (const auto& d : split_commas(c.holidays))
    cfg.holidays.push_back(dbench::Date::from_iso(d));
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }

  dbench::bt::BacktestData data;
  data.history = dbench::market::load_futures_history(c.futures);
  data.rates = dbench::market::load_rates(c.rates);
  const auto raw = dbench::market::load_options(c.options);

  // Group raw quotes into (obs_date, expiry) cross-sections before filtering.
  std::map<std::pair<std::int64_t, std::int64_t>,
           std::vector<dbench::market::RawOptionQuote>>
      grouped;
  for (const auto& q : raw)
    grouped[{q.obs_date.serial(), q.expiry.serial()}].push_back(q);
  for (const auto& [key, quotes] : grouped) {
    const auto obs = dbench::Date::from_serial(key.first);
    const auto expiry = dbench::Date::from_serial(key.second);
    const auto f = data.history.settle_on(obs);
    if (!f) continue;
    const double r = data.rates.rate_on(obs);
    const double tau = 28.0 / 360.0;
    try {
      auto cs = dbench::market::filter_cross_section(quotes, *f, r, tau);
      cs.obs_date = obs;
      cs.expiry = expiry;
      data.cross_sections.push_back(std::move(cs));
    } catch (const dbench::market::InsufficientQuotesError&) {
      // risk-neutral models simply skip this cycle
    }
  }

  // Infeasible-window check up front so failures are named before any work.
  {
    const auto rets = data.history.log_returns_up_to(
        data.cross_sections.empty()
            ? data.history.bars.back().date
            : data.cross_sections.front().obs_date.plus_days(0));
    const int need = std::max(cfg.window_6m, cfg.window_5y);
    if (static_cast<int>(rets.size()) < need)
      throw ValidationError(
          "calibration window infeasible: first cycle has " +
          std::to_string(rets.size()) + " returns, needs " +
          std::to_string(need));
  }

  auto res = dbench::bt::run_backtest(cfg, data);

  fs::create_directories(c.out_dir);
  auto path = [&](const char* name) {
    return (fs::path(c.out_dir) / name).string();
  };
  spit(path("scoreboard.json"), res.scoreboard.dump(2) + "\n");
  spit(path("consistency_tests.csv"), res.consistency_table_csv());
  spit(path("tpit_stats.csv"), res.tpit_stats_csv());
  spit(path("loglik.csv"), res.loglik_table_csv());
  spit(path("crps.csv"), res.crps_table_csv());
  spit(path("ifs.csv"), res.ifs_table_csv());
  spit(path("pit_hist.csv"), res.pit_hist_csv());
  {
    std::ostringstream os;
    for (const auto& line : res.audit) os << line << '\n';
    spit(path("audit.jsonl"), os.str());
  }

  ordered_json manifest;
  manifest["version"] = kVersion;
  manifest["seed"] = cfg.seed;
  manifest["config_digest"] = hex_digest(dbench::stats::fnv1a(
      c.config_path.empty() ? res.scoreboard["models"].dump()
                            : slurp(c.config_path)));
  manifest["dataset_digests"] = {
      {"futures", hex_digest(dbench::stats::fnv1a(slurp(c.futures)))},
      {"rates", hex_digest(dbench::stats::fnv1a(slurp(c.rates)))},
      {"options", hex_digest(dbench::stats::fnv1a(slurp(c.options)))}};
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  manifest["timestamp_unix"] =
      std::chrono::duration_cast<std::chrono::seconds>(now).count();
  spit(path("manifest.json"), manifest.dump(2) + "\n");

  for (const auto& d : res.diagnostics) std::cerr << "note: " << d << '\n';
  std::cout << "backtest complete: " << res.models.size() << " models, "
            << "benchmark " << res.benchmark
            << (res.benchmark_is_fallback ? " (fallback)" : "") << std::endl;
  return 0;
}

// ---------------------------------------------------------- score-tables ----

int cmd_score_tables(const std::string& pvalues_path,
                     const std::string& loglik_path,
                     const std::string& crps_path, const std::string& out_path,
                     double alpha) {
  const auto pv = dbench::csv::read_file(pvalues_path);
  const auto ll = dbench::csv::read_file(loglik_path);
  const auto cr = dbench::csv::read_file(crps_path);
  auto col = [](const dbench::csv::Table& t, const char* name) {
    const int c = t.column(name);
    if (c < 0) throw ValidationError(std::string("missing column: ") + name);
    return c;
  };
  const int pv_m = col(pv, "model"), pv_b = col(pv, "berkowitz"),
            pv_j = col(pv, "jb"), pv_k = col(pv, "ks");
  const int ll_m = col(ll, "model"), ll_v = 1;
  const int cr_m = col(cr, "model"), cr_v = 1;
  if (ll.header.size() < 2 || cr.header.size() < 2)
    throw ValidationError("loglik/crps tables need a value column");

  std::map<std::string, double> ll_by, cr_by;
  for (const auto& row : ll.rows) ll_by[row[ll_m]] = std::stod(row[ll_v]);
  for (const auto& row : cr.rows) cr_by[row[cr_m]] = std::stod(row[cr_v]);

  std::vector<dbench::eval::ScoreTableInput> rows;
  for (const auto& row : pv.rows) {
    dbench::eval::ScoreTableInput in;
    in.model = row[pv_m];
    in.p_berkowitz = std::stod(row[pv_b]);
    in.p_jb = std::stod(row[pv_j]);
    in.p_ks = std::stod(row[pv_k]);
    const auto l = ll_by.find(in.model);
    const auto c = cr_by.find(in.model);
    if (l == ll_by.end() || c == cr_by.end())
      throw ValidationError("model " + in.model +
                            " missing from loglik or crps table");
    in.loglik = l->second;
    in.crps = c->second;
    rows.push_back(std::move(in));
  }
  if (rows.size() != ll_by.size() || rows.size() != cr_by.size())
    throw ValidationError("model sets differ across the three tables");

  const auto out = dbench::eval::score_tables(rows, alpha);
  std::ostringstream os;
  os << "model,consistency,rank_consistency,accuracy,rank_accuracy,errors,"
        "rank_errors,ifs,rank_ifs\n";
  os.setf(std::ios::fixed);
  os.precision(6);
  for (const auto& r : out)
    os << r.model << ',' << r.consistency << ',' << r.rank_consistency << ','
       << r.accuracy << ',' << r.rank_accuracy << ',' << r.errors << ','
       << r.rank_errors << ',' << r.ifs << ',' << r.rank_ifs << '\n';
  if (out_path.empty() || out_path == "-")
    std::cout << os.str();
  else
    spit(out_path, os.str());
  return 0;
}

// ---------------------------------------------------------- validate-data ----

int cmd_validate(const std::string& futures, const std::string& rates,
                 const std::string& options) {
  int issues = 0;
  dbench::market::PriceHistory hist;
  try {
    hist = dbench::market::load_futures_history(futures);
    std::cout << "futures: " << hist.bars.size() << " bars, "
              << hist.bars.front().date.to_iso() << " .. "
              << hist.bars.back().date.to_iso() << '\n';
  } catch (const std::exception& e) {
    std::cout << "futures: ERROR " << e.what() << '\n';
    ++issues;
  }
  try {
    const auto rc = dbench::market::load_rates(rates);
    std::cout << "rates: " << rc.quotes.size() << " quotes\n";
  } catch (const std::exception& e) {
    std::cout << "rates: ERROR " << e.what() << '\n';
    ++issues;
  }
  try {
    const auto opts = dbench::market::load_options(options);
    std::cout << "options: " << opts.size() << " rows\n";
    std::map<std::pair<std::int64_t, std::int64_t>, int> groups;
    for (const auto& q : opts)
      ++groups[{q.obs_date.serial(), q.expiry.serial()}];
    std::cout << "options: " << groups.size() << " cross-sections\n";
    for (const auto& [key, n] : groups)
      if (n < 8) {
        std::cout << "options: cross-section "
                  << dbench::Date::from_serial(key.second).to_iso()
                  << " has only " << n << " quotes\n";
        ++issues;
      }
  } catch (const std::exception& e) {
    std::cout << "options: ERROR " << e.what() << '\n';
    ++issues;
  }
  if (issues > 0) {
    std::cout << issues << " issue(s) found" << std::endl;
    return 1;
  }
  std::cout << "ok" << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"densitybench: density forecasting backtest toolkit"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  std::string world = "lognormal", synth_out = "data";
  int cycles = 60;
  std::uint64_t synth_seed = 1;
  double sigma = 0.20, rate = 0.02, f0 = 10000.0;
  synth->add_option("--world", world, "lognormal | heston | gjr");
  synth->add_option("--cycles", cycles, "number of monthly cycles");
  synth->add_option("--seed", synth_seed, "RNG seed");
  synth->add_option("--out", synth_out, "output directory");
  synth->add_option("--sigma", sigma, "lognormal world volatility");
  synth->add_option("--rate", rate, "flat interest rate");
  synth->add_option("--f0", f0, "initial futures level");

  // backtest
  auto* bt = app.add_subcommand("backtest", "run the backtest");
  BacktestCli bc;
  bt->add_option("--config", bc.config_path, "key=value config file");
  bt->add_option("--futures", bc.futures, "futures CSV");
  bt->add_option("--rates", bc.rates, "rates CSV");
  bt->add_option("--options", bc.options, "options CSV");
  bt->add_option("--out", bc.out_dir, "output directory");
  bt->add_option("--roster", bc.roster, "comma-separated model names or all");
  bt->add_option("--window-6m", bc.window_6m, "short window, business days");
  bt->add_option("--window-5y", bc.window_5y, "long window, business days");
  bt->add_option("--n-paths", bc.n_paths, "Monte Carlo paths per forecast");
  bt->add_option("--seed", bc.seed, "master seed");
  bt->add_option("--alpha", bc.alpha, "test significance level");
  bt->add_option("--split-date", bc.split_date, "subperiod split (ISO date)");
  bt->add_option("--grid-lo", bc.grid_lo, "grid lower bound (log-return)");
  bt->add_option("--grid-hi", bc.grid_hi, "grid upper bound");
  bt->add_option("--grid-n", bc.grid_n, "grid points");
  bt->add_option("--threads", bc.threads, "worker cap (0 = hardware)");
  bt->add_option("--sre-starts", bc.sre_starts, "calibration multi-starts");
  bt->add_option("--holidays", bc.holidays, "comma-separated ISO dates");

  // score-tables
  auto* st = app.add_subcommand("score-tables",
                                "normalized scores + IFS from CSV tables");
  std::string pvalues_path, loglik_path, crps_path, ifs_out = "-";
  double st_alpha = 0.05;
  st->add_option("--pvalues", pvalues_path,
                 "CSV: model,berkowitz,jb,ks")->required();
  st->add_option("--loglik", loglik_path, "CSV: model,<value>")->required();
  st->add_option("--crps", crps_path, "CSV: model,<value>")->required();
  st->add_option("--out", ifs_out, "output CSV path or - for stdout");
  st->add_option("--alpha", st_alpha, "significance level, as a fraction");

  // validate-data
  auto* vd = app.add_subcommand("validate-data", "sanity-check a dataset");
  std::string vf, vr, vo;
  vd->add_option("--futures", vf, "futures CSV")->required();
  vd->add_option("--rates", vr, "rates CSV")->required();
  vd->add_option("--options", vo, "options CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (synth->parsed())
      return cmd_synth(world, cycles, synth_seed, synth_out, sigma, rate, f0);
    if (bt->parsed()) return cmd_backtest(bc, bt);
    if (st->parsed())
      return cmd_score_tables(pvalues_path, loglik_path, crps_path, ifs_out,
                              st_alpha);
    if (vd->parsed()) return cmd_validate(vf, vr, vo);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << std::endl;
    return 2;
  }
  return 0;
}
