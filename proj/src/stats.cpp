#include "rcp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace rcp {

double z95() {
  static const double z = boost::math::quantile(boost::math::normal_distribution<>(), 0.975);
  return z;
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  Interval ci{std::max(0.0, centre - half), std::min(1.0, centre + half)};
  // Rounding can push the endpoints past p at the extremes.
  ci.lo = std::min(ci.lo, p);
  ci.hi = std::max(ci.hi, p);
  return ci;
}

Interval normal_mean_interval(double mean, double sd, std::size_t n, double z) {
  if (n == 0) return {mean, mean};
  const double half = z * sd / std::sqrt(static_cast<double>(n));
  return {mean - half, mean + half};
}

MeanSd mean_sd(const std::vector<double>& xs) {
  MeanSd r;
  r.n = xs.size();
  if (xs.empty()) return r;
  double m = 0.0, s = 0.0;
  std::size_t k = 0;
  for (double x : xs) {
    ++k;
    const double d = x - m;
    m += d / static_cast<double>(k);
    s += d * (x - m);
  }
  r.mean = m;
  r.sd = xs.size() > 1 ? std::sqrt(s / static_cast<double>(xs.size() - 1)) : 0.0;
  return r;
}

double kolmogorov_sf(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.27) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = na * nb / (na + nb);
  const double sq = std::sqrt(ne);
  // Stephens' small-sample correction.
  return {d, kolmogorov_sf((sq + 0.12 + 0.11 / sq) * d)};
}

double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("pearson_correlation: size");
  const MeanSd mx = mean_sd(x), my = mean_sd(y);
  if (mx.sd == 0.0 || my.sd == 0.0) return 0.0;
  double c = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) c += (x[i] - mx.mean) * (y[i] - my.mean);
  c /= static_cast<double>(x.size() - 1);
  return c / (mx.sd * my.sd);
}

}  // namespace rcp
