#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "densitybench/backtest.hpp"
#include "densitybench/marketdata.hpp"
#include "densitybench/synth.hpp"

using namespace dbench;
namespace fs = std::filesystem;

namespace {

synth::Dataset small_world(int cycles, std::uint64_t seed) {
  synth::WorldParams wp;
  wp.kind = synth::WorldKind::Lognormal;
  return synth::generate(wp, cycles, seed);
}

bt::BacktestData to_data(const synth::Dataset& ds) {
  return {ds.history, ds.rates, ds.cross_sections};
}

}  // namespace

TEST_SUITE_BEGIN("synth");

TEST_CASE("generation is deterministic in the seed") {
  auto a = small_world(6, 42);
  auto b = small_world(6, 42);
  auto c = small_world(6, 43);
  REQUIRE(a.truth.size() == b.truth.size());
  for (std::size_t i = 0; i < a.truth.size(); ++i) {
    CHECK(a.truth[i].futures == b.truth[i].futures);
    CHECK(a.truth[i].realization == b.truth[i].realization);
  }
  bool differs = a.truth.size() != c.truth.size();
  for (std::size_t i = 0; !differs && i < a.truth.size(); ++i)
    differs = a.truth[i].realization != c.truth[i].realization;
  CHECK(differs);
}

TEST_CASE("cycles follow the 28-day observation rule") {
  auto ds = small_world(8, 7);
  REQUIRE(!ds.truth.empty());
  for (const auto& t : ds.truth) {
    CHECK(t.obs_date.plus_days(28) == t.expiry);
    CHECK(t.futures > 0.0);
    CHECK(t.realization > 0.0);
    CHECK(t.tau_business > 15);
    CHECK(t.tau_business < 25);
    CHECK(ds.history.settle_on(t.expiry).value() ==
          doctest::Approx(t.realization));
    CHECK(ds.history.settle_on(t.obs_date).value() ==
          doctest::Approx(t.futures));
  }
  // History must support the 5-year window before the first observation.
  const auto rets =
      ds.history.log_returns_up_to(ds.truth.front().obs_date);
  CHECK(rets.size() >= 1260);
}

TEST_CASE("written CSVs round-trip through the loaders") {
  auto ds = small_world(4, 11);
  const auto dir = fs::temp_directory_path() / "db_synth_rt";
  fs::create_directories(dir);
  synth::write_csvs(ds, dir.string());
  for (const char* f : {"futures.csv", "rates.csv", "options.csv",
                        "truth.json"})
    CHECK(fs::exists(dir / f));
  auto hist = market::load_futures_history((dir / "futures.csv").string());
  CHECK(hist.bars.size() == ds.history.bars.size());
  auto opts = market::load_options((dir / "options.csv").string());
  CHECK(opts.size() == ds.option_rows.size());
}

TEST_SUITE_END();

TEST_SUITE_BEGIN("backtest");

TEST_CASE("model names parse to the full roster and back") {
  const auto roster = bt::ModelSpec::full_roster();
  REQUIRE(roster.size() == 15);
  for (const auto& spec : roster) {
    const auto again = bt::ModelSpec::parse(spec.name());
    CHECK(again.name() == spec.name());
    CHECK(again.id() == spec.id());
  }
  CHECK_THROWS_AS(bt::ModelSpec::parse("GARCH-X(6m)"), std::invalid_argument);
}

TEST_CASE("build_schedule applies the 28-day rule and attaches sections") {
  auto ds = small_world(6, 13);
  std::vector<Date> expiries;
  for (const auto& cs : ds.cross_sections) expiries.push_back(cs.expiry);
  std::vector<std::string> diags;
  auto cycles = bt::build_schedule(expiries, ds.history, ds.cross_sections,
                                   {}, &diags);
  REQUIRE(cycles.size() == expiries.size());
  for (const auto& c : cycles) {
    CHECK(c.obs_date.plus_days(28) == c.expiry);
    CHECK(c.cs_index >= 0);
    CHECK(c.f_t > 0.0);
  }
  // A fabricated expiry with no futures data must throw.
  CHECK_THROWS_AS(bt::build_schedule({Date(2050, 1, 21)}, ds.history,
                                     ds.cross_sections, {}, nullptr),
                  std::runtime_error);
}

TEST_CASE("benchmark excess columns are zero for the benchmark itself") {
  auto ds = small_world(14, 21);
  bt::BacktestConfig cfg;
  cfg.roster = {bt::ModelSpec::parse("LN-HIS(6m)")};
  cfg.n_paths = 10000;
  cfg.seed = 5;
  auto res = bt::run_backtest(cfg, to_data(ds));
  REQUIRE(res.models.size() == 1);
  CHECK(res.benchmark == "LN-HIS(6m)");
  CHECK_FALSE(res.benchmark_is_fallback);
  CHECK(res.models[0].excess_loglik == doctest::Approx(0.0));
  CHECK(res.models[0].excess_crps == doctest::Approx(0.0));
  CHECK(res.models[0].n_cycles + res.models[0].n_excluded ==
        static_cast<int>(res.models[0].cycles.size()));
}

TEST_CASE("missing benchmark falls back to the first roster model") {
  auto ds = small_world(14, 23);
  bt::BacktestConfig cfg;
  cfg.roster = {bt::ModelSpec::parse("LN-ATM")};
  cfg.n_paths = 10000;
  auto res = bt::run_backtest(cfg, to_data(ds));
  CHECK(res.benchmark == "LN-ATM");
  CHECK(res.benchmark_is_fallback);
  CHECK(res.loglik_table_csv().find("_fallback") != std::string::npos);
}

TEST_CASE("per-model failures do not disturb other models") {
  auto ds = small_world(14, 29);
  // Truncate the early history so the 5-year window is unavailable on the
  // first few cycles while the 6-month window always is.
  synth::Dataset trimmed = ds;
  const auto r0 = ds.history.log_returns_up_to(ds.truth.front().obs_date);
  REQUIRE(r0.size() >= 1260);
  const std::ptrdiff_t drop = static_cast<std::ptrdiff_t>(r0.size()) - 1200;
  trimmed.history.bars.erase(trimmed.history.bars.begin(),
                             trimmed.history.bars.begin() + drop);

  bt::BacktestConfig cfg;
  cfg.roster = {bt::ModelSpec::parse("LN-HIS(6m)"),
                bt::ModelSpec::parse("LN-HIS(5y)")};
  cfg.n_paths = 10000;
  cfg.seed = 9;
  auto both = bt::run_backtest(cfg, to_data(trimmed));

  bt::BacktestConfig solo = cfg;
  solo.roster = {bt::ModelSpec::parse("LN-HIS(6m)")};
  auto alone = bt::run_backtest(solo, to_data(trimmed));

  auto find = [](const bt::BacktestResult& r, const std::string& name) {
    for (const auto& m : r.models)
      if (m.model == name) return &m;
    REQUIRE(false);
    return static_cast<const bt::ModelReport*>(nullptr);
  };
  const auto* short_win = find(both, "LN-HIS(6m)");
  CHECK(short_win->n_excluded == 0);
  CHECK(short_win->loglik ==
        doctest::Approx(find(alone, "LN-HIS(6m)")->loglik));
  const auto* long_win = find(both, "LN-HIS(5y)");
  CHECK(long_win->n_excluded > 0);
  CHECK(long_win->n_cycles > 0);
  CHECK(long_win->n_cycles + long_win->n_excluded ==
        short_win->n_cycles + short_win->n_excluded);
}

TEST_CASE("scoreboard and tables are structurally sound") {
  auto ds = small_world(14, 31);
  bt::BacktestConfig cfg;
  cfg.roster = {bt::ModelSpec::parse("LN-HIS(6m)"),
                bt::ModelSpec::parse("BTS(6m)"),
                bt::ModelSpec::parse("LN-ATM")};
  cfg.n_paths = 10000;
  cfg.seed = 3;
  auto res = bt::run_backtest(cfg, to_data(ds));

  CHECK(res.scoreboard["models"].size() == 3);
  CHECK(res.scoreboard["benchmark"] == "LN-HIS(6m)");
  // One audit record per (cycle, model).
  CHECK(res.audit.size() == res.models[0].cycles.size() * 3);

  // CSV tables carry one row per model plus a header.
  for (const std::string& csv :
       {res.consistency_table_csv(), res.tpit_stats_csv(),
        res.loglik_table_csv(), res.crps_table_csv(), res.ifs_table_csv()}) {
    const auto lines = std::count(csv.begin(), csv.end(), '\n');
    CHECK(lines == 4);
  }
  // 20 histogram bins per model.
  const auto hist_csv = res.pit_hist_csv();
  CHECK(std::count(hist_csv.begin(), hist_csv.end(), '\n') == 1 + 3 * 20);
}

TEST_CASE("config validation rejects bad settings") {
  bt::BacktestConfig cfg;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);  // empty roster
  cfg.roster = {bt::ModelSpec::parse("LN-ATM")};
  cfg.n_paths = 100;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.n_paths = 10000;
  CHECK_NOTHROW(cfg.validate());
}

TEST_SUITE_END();
