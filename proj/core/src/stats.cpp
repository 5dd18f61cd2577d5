#include "densitybench/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <stdexcept>
#include <string_view>

namespace dbench::stats {

namespace bm = boost::math;

double norm_pdf(double x) { return bm::pdf(bm::normal_distribution<>(), x); }
double norm_cdf(double x) { return bm::cdf(bm::normal_distribution<>(), x); }

double norm_quantile(double p) {
  if (p <= 0.0 || p >= 1.0)
    throw std::domain_error("norm_quantile: p must lie in (0,1)");
  return bm::quantile(bm::normal_distribution<>(), p);
}

double chi2_sf(double x, int dof) {
  if (x <= 0.0) return 1.0;
  return bm::cdf(bm::complement(bm::chi_squared_distribution<>(dof), x));
}

double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double term = 2.0 * ((k % 2) ? 1.0 : -1.0) *
                  std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-14) break;
  }
  return std::min(1.0, std::max(0.0, sum));
}

double mean(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

double stddev(std::span<const double> xs) { return std::sqrt(variance(xs)); }

double skewness(std::span<const double> xs) {
  const double m = mean(xs);
  const double n = static_cast<double>(xs.size());
  double m2 = 0.0, m3 = 0.0;
  for (double x : xs) {
    const double d = x - m;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  return m3 / std::pow(m2, 1.5);
}

double kurtosis(std::span<const double> xs) {
  const double m = mean(xs);
  const double n = static_cast<double>(xs.size());
  double m2 = 0.0, m4 = 0.0;
  for (double x : xs) {
    const double d = x - m;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m4 /= n;
  return m4 / (m2 * m2);
}

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(master) ^ a) ^ b);
}

std::uint64_t fnv1a(const std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace dbench::stats
