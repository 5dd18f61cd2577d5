#include "densitybench/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

#include "densitybench/csvio.hpp"
#include "densitybench/stats.hpp"

#include <json.hpp>

namespace dbench::synth {

namespace {

constexpr double kDt = 1.0 / 252.0;

struct SimState {
  std::vector<double> prices;      // one per business day
  std::vector<double> var_state;   // per-day variance state (Heston/GJR)
};

SimState simulate_world(const WorldParams& wp, const std::vector<Date>& days,
                        std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  SimState st;
  st.prices.resize(days.size());
  st.var_state.resize(days.size());
  double lnF = std::log(wp.f0);

  switch (wp.kind) {
    case WorldKind::Lognormal: {
      const double v = wp.sigma * wp.sigma;
      for (std::size_t i = 0; i < days.size(); ++i) {
        st.prices[i] = std::exp(lnF);
        st.var_state[i] = v;
        lnF += -0.5 * v * kDt + wp.sigma * std::sqrt(kDt) * N(rng);
      }
      break;
    }
    case WorldKind::Heston: {
      const auto& h = wp.heston;
      double v = h.v0;
      const double rbar = std::sqrt(1.0 - h.rho * h.rho);
      for (std::size_t i = 0; i < days.size(); ++i) {
        st.prices[i] = std::exp(lnF);
        st.var_state[i] = std::max(v, 1e-10);
        const double vp = std::max(v, 0.0);
        const double z1 = N(rng), z2 = N(rng);
        lnF += -0.5 * vp * kDt + std::sqrt(vp * kDt) * z1;
        v += h.a * (h.vbar - vp) * kDt +
             h.eta * std::sqrt(vp * kDt) * (h.rho * z1 + rbar * z2);
      }
      break;
    }
    case WorldKind::GjrFhs: {
      const auto& g = wp.gjr;
      double s2 = g.omega / (1.0 - g.alpha - g.beta - 0.5 * g.gamma);
      for (std::size_t i = 0; i < days.size(); ++i) {
        st.prices[i] = std::exp(lnF);
        st.var_state[i] = s2;
        const double e = std::sqrt(s2) * N(rng);
        lnF += g.mu + e;
        s2 = g.omega + g.alpha * e * e + g.beta * s2 +
             (e < 0.0 ? g.gamma * e * e : 0.0);
      }
      break;
    }
  }
  return st;
}

// Undiscounted GJR-world call prices by Monte Carlo, one path set shared
// across strikes.
std::vector<double> gjr_call_prices(const GjrWorld& g, double F, double s2_0,
                                    int tau_days,
                                    const std::vector<double>& strikes,
                                    std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  const int n_paths = 40000;
  std::vector<double> sums(strikes.size(), 0.0);
  for (int p = 0; p < n_paths; ++p) {
    double lr = 0.0, s2 = s2_0;
    for (int d = 0; d < tau_days; ++d) {
      const double e = std::sqrt(s2) * N(rng);
      lr += g.mu + e;
      s2 = g.omega + g.alpha * e * e + g.beta * s2 +
           (e < 0.0 ? g.gamma * e * e : 0.0);
    }
    const double ft = F * std::exp(lr);
    for (std::size_t k = 0; k < strikes.size(); ++k)
      if (ft > strikes[k]) sums[k] += ft - strikes[k];
  }
  for (double& s : sums) s /= n_paths;
  return sums;
}

}  // namespace

void WorldParams::validate() const {
  switch (kind) {
    case WorldKind::Lognormal:
      if (!(sigma > 0.0)) throw std::invalid_argument("lognormal world: sigma must be > 0");
      break;
    case WorldKind::Heston:
      heston.validate();
      break;
    case WorldKind::GjrFhs:
      if (!(gjr.omega > 0.0) || gjr.alpha < 0.0 || gjr.beta < 0.0 ||
          gjr.gamma < 0.0 || gjr.alpha + gjr.beta + 0.5 * gjr.gamma >= 1.0)
        throw std::invalid_argument("GJR world: invalid variance parameters");
      break;
  }
  if (!(f0 > 0.0)) throw std::invalid_argument("world: f0 must be > 0");
  if (strike_moneyness.size() < 8)
    throw std::invalid_argument("world: need at least 8 strike moneyness levels");
}

Dataset generate(const WorldParams& params, int n_cycles, std::uint64_t seed) {
  params.validate();
  if (n_cycles < 1) throw std::invalid_argument("n_cycles must be >= 1");

  Dataset ds;
  ds.world = params;

  // Business-day calendar (weekends only) long enough for a 5y window
  // ahead of the first cycle.
  const Date start(1990, 1, 1);
  const int first_expiry_year = 1995, first_expiry_month = 3;
  int last_y = first_expiry_year + (first_expiry_month - 1 + n_cycles) / 12;
  int last_m = 1 + (first_expiry_month - 1 + n_cycles) % 12;
  const Date end = third_friday(last_y, last_m).plus_days(7);

  std::vector<Date> days;
  for (Date d = start; d <= end; d = d.plus_days(1))
    if (!d.is_weekend()) days.push_back(d);

  std::mt19937_64 rng(stats::mix_seed(seed, 0x5eedULL));
  SimState sim = simulate_world(params, days, rng);

  ds.history.bars.reserve(days.size());
  for (std::size_t i = 0; i < days.size(); ++i)
    ds.history.bars.push_back({days[i], sim.prices[i]});
  ds.rates.quotes.push_back({start, params.rate});

  auto day_index = [&](Date d) -> std::ptrdiff_t {
    auto it = std::lower_bound(days.begin(), days.end(), d);
    if (it == days.end() || *it != d) return -1;
    return it - days.begin();
  };

  int y = first_expiry_year, m = first_expiry_month;
  for (int c = 0; c < n_cycles; ++c) {
    const Date expiry = third_friday(y, m);
    if (++m > 12) { m = 1; ++y; }
    const Date obs = expiry.plus_days(-28);
    const auto io = day_index(obs), ie = day_index(expiry);
    if (io < 0 || ie < 0) continue;  // falls on a weekend; skip with no quote

    const double F = sim.prices[io];
    const double vstate = sim.var_state[io];
    const int tau_b = business_days_between(obs, expiry);
    const double tau_vol = tau_b / 252.0;
    const double tau_disc = 28.0 / 360.0;
    const double disc = std::exp(-params.rate * tau_disc);

    std::vector<double> strikes;
    for (double mny : params.strike_moneyness) strikes.push_back(mny * F);
    std::sort(strikes.begin(), strikes.end());

    std::vector<double> call_mids(strikes.size());
    switch (params.kind) {
      case WorldKind::Lognormal:
        for (std::size_t k = 0; k < strikes.size(); ++k)
          call_mids[k] = disc * pricing::black76_price(
                                    F, strikes[k], 0.0, tau_vol, params.sigma,
                                    pricing::OptionKind::Call);
        break;
      case WorldKind::Heston: {
        pricing::HestonParams h = params.heston;
        h.v0 = vstate;
        pricing::CfPricer pr(pricing::cf_heston(h, F, tau_vol), F, 0.0, tau_vol);
        for (std::size_t k = 0; k < strikes.size(); ++k)
          call_mids[k] = disc * pr.call(strikes[k]);
        break;
      }
      case WorldKind::GjrFhs: {
        std::mt19937_64 qrng(stats::mix_seed(seed, 0x900feULL, c));
        auto undisc = gjr_call_prices(params.gjr, F, vstate, tau_b, strikes, qrng);
        for (std::size_t k = 0; k < strikes.size(); ++k)
          call_mids[k] = disc * undisc[k];
        break;
      }
    }

    std::vector<market::RawOptionQuote> raws;
    for (std::size_t k = 0; k < strikes.size(); ++k) {
      market::RawOptionQuote q;
      q.obs_date = obs;
      q.expiry = expiry;
      q.strike = strikes[k];
      double mid;
      if (strikes[k] >= F) {
        q.kind = pricing::OptionKind::Call;
        mid = call_mids[k];
      } else {
        q.kind = pricing::OptionKind::Put;
        mid = call_mids[k] - disc * (F - strikes[k]);
      }
      if (!(mid > 0.0)) continue;
      const double half = std::max(params.spread_frac * mid, 0.5 * params.tick);
      q.bid = std::max(0.0, mid - half);
      q.ask = mid + half;
      raws.push_back(q);
    }

    try {
      auto cs = market::filter_cross_section(raws, F, params.rate, tau_disc);
      ds.cross_sections.push_back(std::move(cs));
      for (const auto& q : raws) ds.option_rows.push_back(q);
      CycleTruth t;
      t.obs_date = obs;
      t.expiry = expiry;
      t.futures = F;
      t.realization = sim.prices[ie];
      t.tau_business = tau_b;
      t.variance_state = vstate;
      ds.truth.push_back(t);
    } catch (const market::InsufficientQuotesError&) {
      // Cycle without a usable cross-section; skipped.
    }
  }
  return ds;
}

void write_csvs(const Dataset& ds, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return std::string(buf);
  };

  csv::Table fut;
  fut.header = {"date", "settle"};
  for (const auto& b : ds.history.bars)
    fut.rows.push_back({b.date.to_iso(), fmt(b.settle)});
  csv::write_file(out_dir + "/futures.csv", fut);

  csv::Table rates;
  rates.header = {"date", "rate"};
  for (const auto& q : ds.rates.quotes)
    rates.rows.push_back({q.date.to_iso(), fmt(q.rate)});
  csv::write_file(out_dir + "/rates.csv", rates);

  csv::Table opts;
  opts.header = {"obs_date", "expiry", "strike", "kind", "bid", "ask"};
  for (const auto& q : ds.option_rows)
    opts.rows.push_back({q.obs_date.to_iso(), q.expiry.to_iso(), fmt(q.strike),
                         q.kind == pricing::OptionKind::Call ? "C" : "P",
                         fmt(q.bid), fmt(q.ask)});
  csv::write_file(out_dir + "/options.csv", opts);

  nlohmann::ordered_json j;
  switch (ds.world.kind) {
    case WorldKind::Lognormal:
      j["world"] = "lognormal";
      j["sigma"] = ds.world.sigma;
      break;
    case WorldKind::Heston:
      j["world"] = "heston";
      j["heston"] = {{"a", ds.world.heston.a},   {"vbar", ds.world.heston.vbar},
                     {"eta", ds.world.heston.eta}, {"rho", ds.world.heston.rho},
                     {"v0", ds.world.heston.v0}};
      break;
    case WorldKind::GjrFhs:
      j["world"] = "gjr_fhs";
      j["gjr"] = {{"mu", ds.world.gjr.mu},       {"omega", ds.world.gjr.omega},
                  {"alpha", ds.world.gjr.alpha}, {"beta", ds.world.gjr.beta},
                  {"gamma", ds.world.gjr.gamma}};
      break;
  }
  j["rate"] = ds.world.rate;
  j["cycles"] = nlohmann::ordered_json::array();
  for (const auto& t : ds.truth) {
    j["cycles"].push_back({{"obs_date", t.obs_date.to_iso()},
                           {"expiry", t.expiry.to_iso()},
                           {"futures", t.futures},
                           {"realization", t.realization},
                           {"tau_business", t.tau_business},
                           {"variance_state", t.variance_state}});
  }
  std::ofstream out(out_dir + "/truth.json");
  out << j.dump(2) << "\n";
}

}  // namespace dbench::synth
