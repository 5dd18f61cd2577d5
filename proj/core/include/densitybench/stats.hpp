#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace dbench::stats {

double norm_pdf(double x);
double norm_cdf(double x);
double norm_quantile(double p);  // p in (0,1)

// Upper-tail probabilities.
double chi2_sf(double x, int dof);

// Asymptotic Kolmogorov distribution: P(sup|F_n - F| * sqrt(n) > lambda).
double kolmogorov_sf(double lambda);

double mean(std::span<const double> xs);
double variance(std::span<const double> xs);   // sample (N-1)
double stddev(std::span<const double> xs);
double skewness(std::span<const double> xs);   // population moment estimator
double kurtosis(std::span<const double> xs);   // non-excess, population

// Deterministic stream splitting: combines a master seed with labels so
// that per-(model, date) streams are independent and reproducible.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t a,
                       std::uint64_t b = 0);
std::uint64_t fnv1a(const std::string_view s);

}  // namespace dbench::stats
