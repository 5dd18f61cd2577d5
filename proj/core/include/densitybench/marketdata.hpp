#pragma once

#include <optional>
#include <string>
#include <vector>

#include "densitybench/dates.hpp"
#include "densitybench/pricing.hpp"

namespace dbench::market {

struct FuturesBar {
  Date date;
  double settle = 0.0;
};

struct PriceHistory {
  std::vector<FuturesBar> bars;  // strictly increasing dates, settle > 0

  std::optional<double> settle_on(Date d) const;
  // Daily log-returns for bars dated <= end, most recent last.
  std::vector<double> log_returns_up_to(Date end) const;
};

struct RateQuote {
  Date date;
  double rate = 0.0;  // annualized simple, act/360
};

struct RateCurve {
  std::vector<RateQuote> quotes;  // sorted by date
  double rate_on(Date d) const;   // forward-filled between quotes
};

struct RawOptionQuote {
  Date obs_date;
  Date expiry;
  double strike = 0.0;
  pricing::OptionKind kind = pricing::OptionKind::Call;
  double bid = 0.0;
  double ask = 0.0;
  double mid() const { return 0.5 * (bid + ask); }
};

struct QuoteEntry {
  double strike = 0.0;
  double mid = 0.0;  // call-equivalent mid price
};

struct CrossSection {
  Date obs_date;
  Date expiry;
  double futures = 0.0;  // F_t
  double rate = 0.0;
  std::vector<QuoteEntry> quotes;  // strictly increasing strikes
};

PriceHistory load_futures_history(const std::string& path);
RateCurve load_rates(const std::string& path);
std::vector<RawOptionQuote> load_options(const std::string& path);

// Put-call parity for futures options: C = P + e^{-r tau} (F - K).
double put_to_call(double put_mid, double F, double K, double r, double tau);

struct InsufficientQuotesError : std::runtime_error {
  explicit InsufficientQuotesError(const std::string& w)
      : std::runtime_error(w) {}
};

// Keeps OTM/ATM calls, converts OTM puts via parity, then iteratively removes
// the quote whose deletion maximally reduces monotonicity/convexity
// violations. Throws InsufficientQuotesError when fewer than 8 survive.
CrossSection filter_cross_section(const std::vector<RawOptionQuote>& raw,
                                  double F, double r, double tau);

enum class MoneynessBucket {
  DeepOtmPut,   // F/K > 1.10
  OtmPut,       // 1.03 - 1.10
  NearTheMoney, // 0.97 - 1.03
  OtmCall,      // 0.90 - 0.97
  DeepOtmCall   // F/K < 0.90
};

MoneynessBucket moneyness_bucket(double F, double K);
const char* bucket_label(MoneynessBucket b);

}  // namespace dbench::market
