#include "densitybench/marketdata.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "densitybench/csvio.hpp"

namespace dbench::market {

std::optional<double> PriceHistory::settle_on(Date d) const {
  auto it = std::lower_bound(
      bars.begin(), bars.end(), d,
      [](const FuturesBar& b, Date x) { return b.date < x; });
  if (it != bars.end() && it->date == d) return it->settle;
  return std::nullopt;
}

std::vector<double> PriceHistory::log_returns_up_to(Date end) const {
  std::vector<double> out;
  for (std::size_t i = 1; i < bars.size(); ++i) {
    if (bars[i].date > end) break;
    out.push_back(std::log(bars[i].settle / bars[i - 1].settle));
  }
  return out;
}

double RateCurve::rate_on(Date d) const {
  if (quotes.empty()) throw std::runtime_error("empty rate curve");
  auto it = std::upper_bound(
      quotes.begin(), quotes.end(), d,
      [](Date x, const RateQuote& q) { return x < q.date; });
  if (it == quotes.begin()) return quotes.front().rate;
  return std::prev(it)->rate;
}

namespace {
double parse_num(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("unparsable " + what + ": '" + s + "'");
  }
}
}  // namespace

PriceHistory load_futures_history(const std::string& path) {
  auto t = csv::read_file(path);
  const int ci_date = t.column("date"), ci_settle = t.column("settle");
  if (ci_date < 0 || ci_settle < 0)
    throw std::runtime_error("futures CSV must have header date,settle");
  if (t.rows.empty()) throw std::runtime_error("empty history: " + path);

  PriceHistory h;
  for (const auto& row : t.rows) {
    FuturesBar bar;
    bar.date = Date::from_iso(row.at(ci_date));
    bar.settle = parse_num(row.at(ci_settle), "settle");
    if (!(bar.settle > 0.0))
      throw std::runtime_error("non-positive price on " + bar.date.to_iso());
    h.bars.push_back(bar);
  }
  std::stable_sort(h.bars.begin(), h.bars.end(),
                   [](const FuturesBar& a, const FuturesBar& b) {
                     return a.date < b.date;
                   });
  // Deduplicate; conflicting values on the same date are an input error.
  std::vector<FuturesBar> dedup;
  for (const auto& b : h.bars) {
    if (!dedup.empty() && dedup.back().date == b.date) {
      if (dedup.back().settle != b.settle)
        throw std::runtime_error("duplicate date with conflicting value: " +
                                 b.date.to_iso());
      continue;
    }
    dedup.push_back(b);
  }
  h.bars = std::move(dedup);
  return h;
}

RateCurve load_rates(const std::string& path) {
  auto t = csv::read_file(path);
  const int ci_date = t.column("date"), ci_rate = t.column("rate");
  if (ci_date < 0 || ci_rate < 0)
    throw std::runtime_error("rates CSV must have header date,rate");
  RateCurve c;
  for (const auto& row : t.rows) {
    RateQuote q;
    q.date = Date::from_iso(row.at(ci_date));
    q.rate = parse_num(row.at(ci_rate), "rate");
    if (!std::isfinite(q.rate))
      throw std::runtime_error("non-finite rate on " + q.date.to_iso());
    c.quotes.push_back(q);
  }
  std::sort(c.quotes.begin(), c.quotes.end(),
            [](const RateQuote& a, const RateQuote& b) { return a.date < b.date; });
  return c;
}

std::vector<RawOptionQuote> load_options(const std::string& path) {
  auto t = csv::read_file(path);
  const int c_obs = t.column("obs_date"), c_exp = t.column("expiry");
  const int c_k = t.column("strike"), c_kind = t.column("kind");
  const int c_bid = t.column("bid"), c_ask = t.column("ask");
  if (c_obs < 0 || c_exp < 0 || c_k < 0 || c_kind < 0 || c_bid < 0 || c_ask < 0)
    throw std::runtime_error(
        "options CSV must have header obs_date,expiry,strike,kind,bid,ask");
  std::vector<RawOptionQuote> out;
  for (const auto& row : t.rows) {
    RawOptionQuote q;
    q.obs_date = Date::from_iso(row.at(c_obs));
    q.expiry = Date::from_iso(row.at(c_exp));
    q.strike = parse_num(row.at(c_k), "strike");
    const std::string& kind = row.at(c_kind);
    if (kind == "C")
      q.kind = pricing::OptionKind::Call;
    else if (kind == "P")
      q.kind = pricing::OptionKind::Put;
    else
      throw std::runtime_error("option kind must be C or P, got '" + kind + "'");
    q.bid = parse_num(row.at(c_bid), "bid");
    q.ask = parse_num(row.at(c_ask), "ask");
    if (q.strike <= 0.0 || q.bid < 0.0 || q.ask < q.bid)
      throw std::runtime_error("invalid option quote on " + q.obs_date.to_iso());
    out.push_back(q);
  }
  return out;
}

double put_to_call(double put_mid, double F, double K, double r, double tau) {
  if (!(F > 0.0) || !(K > 0.0) || !std::isfinite(put_mid + r + tau))
    throw std::invalid_argument("put_to_call: invalid inputs");
  return put_mid + std::exp(-r * tau) * (F - K);
}

namespace {

int count_violations(const std::vector<QuoteEntry>& q) {
  int v = 0;
  for (std::size_t i = 1; i < q.size(); ++i)
    if (q[i].mid >= q[i - 1].mid) ++v;
  for (std::size_t i = 1; i + 1 < q.size(); ++i)
    if (0.5 * (q[i - 1].mid + q[i + 1].mid) < q[i].mid) ++v;
  return v;
}

}  // namespace

CrossSection filter_cross_section(const std::vector<RawOptionQuote>& raw,
                                  double F, double r, double tau) {
  CrossSection cs;
  cs.futures = F;
  cs.rate = r;
  if (!raw.empty()) {
    cs.obs_date = raw.front().obs_date;
    cs.expiry = raw.front().expiry;
  }

  // OTM/ATM calls kept as-is; OTM puts converted via parity. Quotes whose
  // call-equivalent price is non-positive are dropped.
  std::map<double, std::pair<double, int>> by_strike;  // strike -> (sum, n)
  for (const auto& q : raw) {
    double call_mid;
    if (q.kind == pricing::OptionKind::Call) {
      if (q.strike < F) continue;  // ITM call
      call_mid = q.mid();
    } else {
      if (q.strike >= F) continue;  // ITM put
      call_mid = put_to_call(q.mid(), F, q.strike, r, tau);
    }
    if (!(call_mid > 0.0)) continue;
    auto& acc = by_strike[q.strike];
    acc.first += call_mid;
    acc.second += 1;
  }
  std::vector<QuoteEntry> quotes;
  quotes.reserve(by_strike.size());
  for (const auto& [k, acc] : by_strike)
    quotes.push_back({k, acc.first / acc.second});

  // Remove the quote whose deletion maximally reduces violations, to a
  // fixed point.
  while (count_violations(quotes) > 0) {
    int best_after = count_violations(quotes);
    std::size_t best_i = quotes.size();
    for (std::size_t i = 0; i < quotes.size(); ++i) {
      std::vector<QuoteEntry> trial;
      trial.reserve(quotes.size() - 1);
      for (std::size_t j = 0; j < quotes.size(); ++j)
        if (j != i) trial.push_back(quotes[j]);
      const int after = count_violations(trial);
      if (after < best_after) {
        best_after = after;
        best_i = i;
      }
    }
    if (best_i == quotes.size()) quotes.pop_back();  // cannot improve; shrink
    else quotes.erase(quotes.begin() + static_cast<std::ptrdiff_t>(best_i));
    if (quotes.empty()) break;
  }

  if (quotes.size() < 8)
    throw InsufficientQuotesError(
        "insufficient quotes: " + std::to_string(quotes.size()) +
        " survive the arbitrage filter (8 required)");
  cs.quotes = std::move(quotes);
  return cs;
}

MoneynessBucket moneyness_bucket(double F, double K) {
  if (!(F > 0.0) || !(K > 0.0))
    throw std::invalid_argument("moneyness_bucket: F,K must be > 0");
  const double m = F / K;
  // Boundary values go to the inner (non-deep) bucket.
  if (m > 1.10) return MoneynessBucket::DeepOtmPut;
  if (m > 1.03) return MoneynessBucket::OtmPut;
  if (m >= 0.97) return MoneynessBucket::NearTheMoney;
  if (m >= 0.90) return MoneynessBucket::OtmCall;
  return MoneynessBucket::DeepOtmCall;
}

const char* bucket_label(MoneynessBucket b) {
  switch (b) {
    case MoneynessBucket::DeepOtmPut: return "Deep OTM put";
    case MoneynessBucket::OtmPut: return "OTM put";
    case MoneynessBucket::NearTheMoney: return "Near the money";
    case MoneynessBucket::OtmCall: return "OTM call";
    case MoneynessBucket::DeepOtmCall: return "Deep OTM call";
  }
  return "?";
}

}  // namespace dbench::market
