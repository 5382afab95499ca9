#pragma once

#include <cstddef>
#include <vector>

namespace rcp {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double half_width() const { return 0.5 * (hi - lo); }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

// Two-sided 95% normal quantile.
double z95();

// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = z95());

// Normal-approximation interval for a sample mean.
Interval normal_mean_interval(double mean, double sd, std::size_t n, double z = z95());

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
  std::size_t n = 0;
};
MeanSd mean_sd(const std::vector<double>& xs);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Two-sample Kolmogorov-Smirnov test with the asymptotic Kolmogorov p-value.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Survival function of the Kolmogorov distribution, P(K > x).
double kolmogorov_sf(double x);

double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rcp
