// Acceptance gate: each criterion prints exactly one "criterion N: PASS" or
// "criterion N: FAIL (...)" line and sets the exit code.
//
// Usage: acceptance <criterion 1..8> [path-to-cli]   (the CLI path is used
// by criterion 1 only)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "densitybench/backtest.hpp"
#include "densitybench/csvio.hpp"
#include "densitybench/evaluation.hpp"
#include "densitybench/histmodels.hpp"
#include "densitybench/pricing.hpp"
#include "densitybench/rndmodels.hpp"
#include "densitybench/stats.hpp"
#include "densitybench/synth.hpp"
#include "reference_tables.hpp"

using namespace dbench;
namespace fs = std::filesystem;

namespace {

std::string g_cli_path;

bool fail(int n, const std::string& why) {
  std::printf("criterion %d: FAIL (%s)\n", n, why.c_str());
  return false;
}
bool pass(int n) {
  std::printf("criterion %d: PASS\n", n);
  return true;
}

// ------------------------------------------------------------ criterion 1 --
// Published-figures IFS reproduction through the score-tables subcommand:
// every normalized score and IFS within 0.002, all ranks exact, under 1 s.

bool criterion1() {
  if (g_cli_path.empty()) return fail(1, "CLI path argument missing");
  const auto dir = fs::temp_directory_path() / "db_accept1";
  fs::create_directories(dir);
  {
    std::ofstream pv(dir / "pvalues.csv"), ll(dir / "loglik.csv"),
        cr(dir / "crps.csv");
    pv << "model,berkowitz,jb,ks\n";
    ll << "model,loglik\n";
    cr << "model,crps\n";
    for (const auto& r : reftables::kRows) {
      pv << r.model << ',' << r.p_berkowitz << ',' << r.p_jb << ',' << r.p_ks
         << '\n';
      ll << r.model << ',' << r.excess_loglik << '\n';
      cr << r.model << ',' << r.excess_crps << '\n';
    }
  }
  const auto out = (dir / "ifs.csv").string();
  std::ostringstream cmd;
  cmd << '"' << g_cli_path << "\" score-tables --pvalues "
      << (dir / "pvalues.csv") << " --loglik " << (dir / "loglik.csv")
      << " --crps " << (dir / "crps.csv") << " --out " << out;

  const auto t0 = std::chrono::steady_clock::now();
  const int rc = std::system(cmd.str().c_str());
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (rc != 0) return fail(1, "score-tables exited with " + std::to_string(rc));
  if (secs >= 1.0) return fail(1, "runtime " + std::to_string(secs) + " s");

  auto table = csv::read_file(out);
  if (table.rows.size() != 15) return fail(1, "expected 15 rows");
  const int c_m = table.column("model"), c_c = table.column("consistency"),
            c_a = table.column("accuracy"), c_e = table.column("errors"),
            c_i = table.column("ifs");
  const int r_c = table.column("rank_consistency"),
            r_a = table.column("rank_accuracy"),
            r_e = table.column("rank_errors"), r_i = table.column("rank_ifs");

  // Expected IFS ranks follow from ordering the expected IFS values.
  std::vector<std::pair<double, std::string>> order;
  for (const auto& r : reftables::kRows) order.push_back({r.ifs, r.model});
  std::sort(order.begin(), order.end(), std::greater<>());

  for (const auto& row : table.rows) {
    const reftables::Row* e = nullptr;
    for (const auto& r : reftables::kRows)
      if (row[c_m] == r.model) e = &r;
    if (!e) return fail(1, "unknown model " + row[c_m]);
    const double dc = std::fabs(std::stod(row[c_c]) - e->consistency);
    const double da = std::fabs(std::stod(row[c_a]) - e->accuracy);
    const double de = std::fabs(std::stod(row[c_e]) - e->errors);
    const double di = std::fabs(std::stod(row[c_i]) - e->ifs);
    if (std::max({dc, da, de, di}) > 0.002)
      return fail(1, row[c_m] + " score deviates by more than 0.002");
    if (std::stoi(row[r_c]) != e->rank_consistency ||
        std::stoi(row[r_a]) != e->rank_accuracy ||
        std::stoi(row[r_e]) != e->rank_errors)
      return fail(1, row[c_m] + " category rank mismatch");
    int expected_ifs_rank = 0;
    for (std::size_t k = 0; k < order.size(); ++k)
      if (order[k].second == row[c_m])
        expected_ifs_rank = static_cast<int>(k + 1);
    if (std::stoi(row[r_i]) != expected_ifs_rank)
      return fail(1, row[c_m] + " IFS rank mismatch");
  }
  return pass(1);
}

// ------------------------------------------------------------ criterion 2 --
// Fourier oracle: degenerate-Heston CDF vs the analytic lognormal CDF
// (< 1e-6 over 50 points) and CF call prices vs Black-76 (< 1e-6 relative).

bool criterion2() {
  const double F = 10000.0, sigma = 0.2, tau = 28.0 / 252.0, r = 0.02;
  pricing::HestonParams degen{2.0, sigma * sigma, 1e-13, 0.0, sigma * sigma};
  auto cf = pricing::cf_heston(degen, F, tau);
  const double sd = sigma * std::sqrt(tau);
  double max_abs = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double x = F * std::exp(-0.45 + 0.9 * i / 49.0);
    const double analytic = stats::norm_cdf(
        (std::log(x / F) + 0.5 * sd * sd) / sd);
    max_abs = std::max(max_abs, std::fabs(pricing::cf_to_cdf(cf, x) - analytic));
  }
  if (max_abs >= 1e-6)
    return fail(2, "CDF max abs error " + std::to_string(max_abs));

  double max_rel = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double K = F * (0.85 + 0.3 * i / 19.0);
    const double ref =
        pricing::black76_price(F, K, r, tau, sigma, pricing::OptionKind::Call);
    const double got = pricing::cf_call_price(cf, K, F, r, tau);
    max_rel = std::max(max_rel, std::fabs(got - ref) / ref);
  }
  if (max_rel >= 1e-6)
    return fail(2, "call price max rel error " + std::to_string(max_rel));
  return pass(2);
}

// ------------------------------------------------------------ criterion 3 --
// Monte Carlo cross-check: Heston and VG CDFs from Fourier inversion vs
// 1e6-path simulations, max abs deviation < 3e-3.

bool criterion3() {
  const double F = 10000.0, tau = 28.0 / 252.0;
  const int n_paths = 1000000;
  std::vector<double> probe;  // log-return probe points
  for (double x = -0.30; x <= 0.301; x += 0.02) probe.push_back(x);

  auto compare = [&](const pricing::CharFn& cf,
                     const std::vector<double>& terminal_lr, double* dev) {
    std::vector<double> sorted = terminal_lr;
    std::sort(sorted.begin(), sorted.end());
    pricing::FourierInverter inv(cf);
    double worst = 0.0;
    for (double x : probe) {
      const auto lo = std::lower_bound(sorted.begin(), sorted.end(), x);
      const double emp = double(lo - sorted.begin()) / sorted.size();
      const double fou = inv.cdf(F * std::exp(x));
      worst = std::max(worst, std::fabs(emp - fou));
    }
    *dev = worst;
    return worst < 3e-3;
  };

  // Heston, full-truncation Euler.
  pricing::HestonParams hp{2.0, 0.04, 0.3, -0.5, 0.05};
  std::vector<double> heston_lr(n_paths);
  {
    std::mt19937_64 rng(101);
    std::normal_distribution<double> z;
    const int steps = 300;
    const double dt = tau / steps, sdt = std::sqrt(dt);
    const double rho_c = std::sqrt(1.0 - hp.rho * hp.rho);
    for (int p = 0; p < n_paths; ++p) {
      double x = 0.0, v = hp.v0;
      for (int s = 0; s < steps; ++s) {
        const double vp = std::max(v, 0.0);
        const double z1 = z(rng), z2 = z(rng);
        x += -0.5 * vp * dt + std::sqrt(vp) * sdt * z1;
        v += hp.a * (hp.vbar - vp) * dt +
             hp.eta * std::sqrt(vp) * sdt * (hp.rho * z1 + rho_c * z2);
      }
      heston_lr[p] = x;
    }
  }
  double dev_h = 0.0;
  if (!compare(pricing::cf_heston(hp, F, tau), heston_lr, &dev_h))
    return fail(3, "Heston deviation " + std::to_string(dev_h));

  // VG via its exact gamma-subordinator representation.
  pricing::VGParams vp_{0.18, 0.35, -0.12};
  std::vector<double> vg_lr(n_paths);
  {
    std::mt19937_64 rng(202);
    std::normal_distribution<double> z;
    std::gamma_distribution<double> g(tau / vp_.nu, vp_.nu);
    const double omega =
        std::log(1.0 - vp_.theta * vp_.nu - 0.5 * vp_.sigma * vp_.sigma *
                                                vp_.nu) /
        vp_.nu;
    for (int p = 0; p < n_paths; ++p) {
      const double G = g(rng);
      vg_lr[p] = omega * tau + vp_.theta * G +
                 vp_.sigma * std::sqrt(G) * z(rng);
    }
  }
  double dev_v = 0.0;
  if (!compare(pricing::cf_vg(vp_, F, tau), vg_lr, &dev_v))
    return fail(3, "VG deviation " + std::to_string(dev_v));
  return pass(3);
}

// ------------------------------------------------------------ criterion 4 --
// GARCH recovery: (omega, alpha, beta) = (1e-6, 0.08, 0.90) recovered within
// (5e-7, 0.03, 0.04) for at least 9 of 10 seeds on 10,000 observations.

bool criterion4() {
  const double omega = 1e-6, alpha = 0.08, beta = 0.90;
  int ok = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    hist::ReturnWindow w;
    w.label = "5y";
    w.end_date = Date(2016, 11, 18);
    double s2 = omega / (1.0 - alpha - beta);
    for (int t = 0; t < 10000; ++t) {
      const double e = std::sqrt(s2) * z(rng);
      w.returns.push_back(e);
      s2 = omega + alpha * e * e + beta * s2;
    }
    auto p = hist::calibrate_garch(w, hist::GarchVariant::Normal);
    if (p.converged && std::fabs(p.omega - omega) < 5e-7 &&
        std::fabs(p.alpha - alpha) < 0.03 && std::fabs(p.beta - beta) < 0.04)
      ++ok;
  }
  if (ok < 9) return fail(4, std::to_string(ok) + "/10 seeds recovered");
  return pass(4);
}

// ------------------------------------------------------------ criterion 5 --
// Self-consistency: the matched model passes all three tests on a 200-cycle
// lognormal world, and the Berkowitz test has correct finite-sample size.

bool criterion5() {
  // Part A: empirical size of the Berkowitz test.
  std::mt19937_64 rng(7);
  std::normal_distribution<double> z;
  int rejects = 0;
  const int reps = 1000;
  for (int rep = 0; rep < reps; ++rep) {
    std::vector<double> xs(254);
    for (double& x : xs) x = z(rng);
    if (eval::berkowitz_lr3(xs).p_value < 0.05) ++rejects;
  }
  const double size = 100.0 * rejects / reps;
  if (size < 3.5 || size > 6.5)
    return fail(5, "Berkowitz empirical size " + std::to_string(size) + "%");

  // Part B: LN-ATM on a 200-cycle lognormal world.
  synth::WorldParams wp;
  wp.kind = synth::WorldKind::Lognormal;
  auto ds = synth::generate(wp, 200, 17);
  if (ds.truth.size() < 150)
    return fail(5, "synthetic world produced too few cycles");
  bt::BacktestConfig cfg;
  cfg.roster = {bt::ModelSpec::parse("LN-ATM")};
  cfg.n_paths = 10000;
  cfg.seed = 3;
  auto res = bt::run_backtest(cfg, {ds.history, ds.rates, ds.cross_sections});
  const auto& m = res.models[0];
  if (!m.tests_computed) return fail(5, "ensemble tests not computed");
  if (m.berkowitz.p_value <= 0.05)
    return fail(5, "Berkowitz p " + std::to_string(m.berkowitz.p_value));
  if (m.jb.p_value <= 0.05)
    return fail(5, "JB p " + std::to_string(m.jb.p_value));
  if (m.ks.p_value <= 0.05)
    return fail(5, "KS p " + std::to_string(m.ks.p_value));
  return pass(5);
}

// ------------------------------------------------------------ criterion 6 --
// CRPS oracle: unit Gaussian forecast with the realization at its mean gives
// sqrt(2 phi(0) - 1/sqrt(pi)); a point mass gives < grid resolution.

bool criterion6() {
  std::vector<double> xs, cdf;
  for (int i = 0; i <= 16000; ++i) {
    xs.push_back(-8.0 + i * 0.001);
    cdf.push_back(stats::norm_cdf(xs.back()));
  }
  const double expected =
      std::sqrt(2.0 * stats::norm_pdf(0.0) - 1.0 / std::sqrt(M_PI));
  const double got = eval::crps_from_cdf(xs, cdf, 0.0);
  if (std::fabs(got - expected) >= 1e-4)
    return fail(6, "Gaussian CRPS " + std::to_string(got) + " vs " +
                       std::to_string(expected));

  // Point mass at the realization: the CDF step is resolved by a narrow
  // cell so the trapezoid quadrature sees a vanishing integrand.
  std::vector<double> pxs = {-0.5, -1e-9, 0.0, 0.5};
  std::vector<double> pcdf = {0.0, 0.0, 1.0, 1.0};
  const double pm = eval::crps_from_cdf(pxs, pcdf, 0.0);
  if (pm >= 1e-3) return fail(6, "point-mass CRPS " + std::to_string(pm));
  return pass(6);
}

// ------------------------------------------------------------ criterion 7 --
// KLIC ordering in a 500-cycle Heston world: the true-model RND has the
// highest expected log score among {LN-ATM, HESTON, LN-HIS}, and a
// deliberately narrow forecast is rejected by JB or Berkowitz.

bool criterion7() {
  synth::WorldParams wp;
  wp.kind = synth::WorldKind::Heston;
  auto ds = synth::generate(wp, 500, 11);
  if (ds.truth.size() < 400)
    return fail(7, "synthetic world produced too few cycles");

  GridSpec grid;
  double ll_true = 0.0, ll_lnatm = 0.0, ll_lnhis = 0.0;
  std::vector<double> narrow_tpits;
  int n = 0;

  for (const auto& t : ds.truth) {
    const market::CrossSection* cs = nullptr;
    for (const auto& c : ds.cross_sections)
      if (c.expiry == t.expiry) cs = &c;
    if (!cs) continue;
    const double tau = t.tau_business / 252.0;

    // True model: Heston with the world parameters and the realized
    // variance state at the observation date.
    pricing::HestonParams hp = wp.heston;
    hp.v0 = t.variance_state;
    auto d_true = rnd::rnd_from_cf(
        rnd::RndModel::Heston,
        {hp.a, hp.vbar, hp.eta, hp.rho, hp.v0}, t.futures, tau, grid,
        t.obs_date, t.expiry);

    rnd::Horizon h{tau, 28.0 / 360.0};
    const double atm = rnd::atm_vol(*cs, h);
    auto d_atm = rnd::lognormal_rnd(t.futures, atm, tau, grid, t.obs_date,
                                    t.expiry);

    auto rets = ds.history.log_returns_up_to(t.obs_date);
    hist::ReturnWindow w;
    w.returns.assign(rets.end() - 126, rets.end());
    w.label = "6m";
    w.end_date = t.obs_date;
    auto [mu, sd] = hist::calibrate_lognormal_hist(w);
    hist::SimInputs in;
    in.model = hist::HistModel::LnHis;
    in.mu = mu;
    in.sigma_daily = sd;
    auto ps = hist::simulate_paths(in, t.futures, t.tau_business, 20000,
                                   stats::mix_seed(77, 0, t.obs_date.serial()));
    auto d_his = hist::empirical_density(ps, grid, t.obs_date, t.expiry);

    ll_true += eval::log_density_at(d_true, t.realization);
    ll_lnatm += eval::log_density_at(d_atm, t.realization);
    ll_lnhis += eval::log_density_at(d_his, t.realization);

    // Misspecified narrow forecast: half the ATM volatility.
    auto d_narrow = rnd::lognormal_rnd(t.futures, 0.5 * atm, tau, grid,
                                       t.obs_date, t.expiry);
    narrow_tpits.push_back(
        stats::norm_quantile(eval::pit(d_narrow, t.realization)));
    ++n;
  }
  if (n < 400) return fail(7, "too few scored cycles");
  if (!(ll_true > ll_lnatm && ll_true > ll_lnhis)) {
    std::ostringstream os;
    os << "log scores: true " << ll_true << ", LN-ATM " << ll_lnatm
       << ", LN-HIS " << ll_lnhis;
    return fail(7, os.str());
  }
  const double p_jb = eval::jarque_bera(narrow_tpits).p_value;
  const double p_bk = eval::berkowitz_lr3(narrow_tpits).p_value;
  if (p_jb >= 0.05 && p_bk >= 0.05)
    return fail(7, "narrow density not rejected (JB p " +
                       std::to_string(p_jb) + ", Berkowitz p " +
                       std::to_string(p_bk) + ")");
  return pass(7);
}

// ------------------------------------------------------------ criterion 8 --
// Determinism: two identical backtests produce byte-identical ScoreBoard
// JSON.

bool criterion8() {
  synth::WorldParams wp;
  wp.kind = synth::WorldKind::Lognormal;
  auto ds = synth::generate(wp, 24, 5);

  bt::BacktestConfig cfg;
  cfg.roster = {bt::ModelSpec::parse("LN-HIS(6m)"),
                bt::ModelSpec::parse("BTS(6m)"),
                bt::ModelSpec::parse("GARCH-N(6m)"),
                bt::ModelSpec::parse("LN-ATM"),
                bt::ModelSpec::parse("HESTON")};
  cfg.n_paths = 10000;
  cfg.seed = 12345;
  cfg.calib.n_starts = 2;

  bt::BacktestData data{ds.history, ds.rates, ds.cross_sections};
  const auto a = bt::run_backtest(cfg, data).scoreboard.dump(2);
  const auto b = bt::run_backtest(cfg, data).scoreboard.dump(2);
  if (a != b) return fail(8, "scoreboard JSON differs between runs");
  if (a.empty()) return fail(8, "empty scoreboard");
  return pass(8);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <criterion 1..8> [cli-path]\n");
    return 2;
  }
  if (argc > 2) g_cli_path = argv[2];
  const int n = std::atoi(argv[1]);
  bool ok = false;
  switch (n) {
    case 1: ok = criterion1(); break;
    case 2: ok = criterion2(); break;
    case 3: ok = criterion3(); break;
    case 4: ok = criterion4(); break;
    case 5: ok = criterion5(); break;
    case 6: ok = criterion6(); break;
    case 7: ok = criterion7(); break;
    case 8: ok = criterion8(); break;
    default:
      std::fprintf(stderr, "unknown criterion %d\n", n);
      return 2;
  }
  return ok ? 0 : 1;
}
