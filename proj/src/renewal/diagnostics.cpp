#include "rcp/renewal/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rcp/errors.hpp"

namespace rcp {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

// Sorted knots lo = k_0 < ... < k_n = hi splitting [lo,hi] at non-smooth points.
std::vector<double> knots(const InterarrivalLaw& law, double lo, double hi) {
  std::vector<double> k{lo, hi};
  for (double b : law.breakpoints()) {
    if (b > lo && b < hi) k.push_back(b);
  }
  if (lo < 1.0 && hi > 1.0) k.push_back(1.0);
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  return k;
}

// Integrates g over [a,b]; wide positive ranges are mapped to log scale.
template <class G>
double integrate_piece(G g, double a, double b, double rel_tol) {
  if (b <= a) return 0.0;
  if (b - a <= 1e-6) return GK::integrate(g, a, b, 0, rel_tol);
  if (a > 0.0 && b / a > 4.0) {
    auto h = [&](double x) {
      const double s = std::exp(x);
      return g(s) * s;
    };
    return GK::integrate(h, std::log(a), std::log(b), 20, rel_tol);
  }
  return GK::integrate(g, a, b, 20, rel_tol);
}

}  // namespace

double moment_function_f(double x, double theta) {
  if (x < 1.0) return 0.0;
  return std::exp(theta * std::sqrt(std::log(x)));
}

double theta_min(int d) { return std::sqrt(8.0 * d * std::log(2.0)); }

double integrated_tail_m(const InterarrivalLaw& law, double t, double rel_tol) {
  if (t < 0.0) throw DomainError("integrated_tail_m: t must be >= 0");
  return integrated_tail_between(law, 0.0, t, rel_tol);
}

double integrated_tail_between(const InterarrivalLaw& law, double a, double b, double rel_tol) {
  if (b <= a) return 0.0;
  const auto k = knots(law, a, b);
  auto g = [&](double s) { return law.tail(s); };
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < k.size(); ++i) sum += integrate_piece(g, k[i], k[i + 1], rel_tol);
  return sum;
}

double inverse_integrated_tail(const InterarrivalLaw& law, double y, double rel_tol,
                               double abs_factor) {
  if (y < 0.0) throw DomainError("inverse_integrated_tail: y must be >= 0");
  if (y >= law.mean()) throw DomainError("inverse_integrated_tail: y >= sup m");
  if (y == 0.0) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (integrated_tail_m(law, hi, rel_tol) < y) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > abs_factor * hi) {
    const double mid = 0.5 * (lo + hi);
    if (integrated_tail_m(law, mid, rel_tol) < y) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

ProbabilityEstimate gap_probability_estimate(const InterarrivalLaw& law, double tau, double t,
                                             double u, std::size_t trials, Rng& rng) {
  if (!(u > 0.0)) throw DomainError("gap_probability_estimate: u must be > 0");
  if (trials == 0) throw DomainError("gap_probability_estimate: trials must be >= 1");
  if (tau > t) throw DomainError("gap_probability_estimate: t must not precede tau");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    const RenewalTrack tr = generate_track(law, tau, t + u, rng);
    const auto it = std::lower_bound(tr.marks.begin(), tr.marks.end(), t);
    if (it == tr.marks.end()) ++hits;
  }
  ProbabilityEstimate r;
  r.successes = hits;
  r.trials = trials;
  r.estimate = static_cast<double>(hits) / static_cast<double>(trials);
  r.ci = wilson_interval(hits, trials);
  return r;
}

MeanEstimate renewal_measure_estimate(const InterarrivalLaw& law, double x, double h,
                                      std::size_t trials, Rng& rng) {
  if (x < 0.0 || !(h > 0.0)) throw DomainError("renewal_measure_estimate: need x >= 0, h > 0");
  if (trials == 0) throw DomainError("renewal_measure_estimate: trials must be >= 1");
  std::vector<double> counts(trials);
  for (std::size_t i = 0; i < trials; ++i) {
    const RenewalTrack tr = generate_track(law, 0.0, x + h, rng);
    counts[i] = static_cast<double>(count_marks(tr, x, x + h));
  }
  const MeanSd ms = mean_sd(counts);
  return {ms.mean, ms.sd, normal_mean_interval(ms.mean, ms.sd, trials), trials};
}

NegligibilityResult negligibility_integral(const InterarrivalLaw& law, double delta, double t,
                                           double rel_tol) {
  if (!law.has_density()) throw UnsupportedLawError("negligibility_integral: law has no density");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("negligibility_integral: delta must lie in (0,1)");
  const double top = delta * t;
  if (top <= 1.0) return {};
  std::vector<double> k{1.0, top};
  for (double b : law.breakpoints()) {
    if (b > 1.0 && b < top) k.push_back(b);
    if (t - b > 1.0 && t - b < top) k.push_back(t - b);
  }
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  auto g = [&](double z) {
    const double s = law.tail(z);
    return law.density(t - z) / (z * s * s);
  };
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < k.size(); ++i) sum += integrate_piece(g, k[i], k[i + 1], rel_tol);
  return {sum, sum / (law.tail(t) / t)};
}

MomentConstantFit fit_moment_constant(const InterarrivalLaw& law, double theta,
                                      const std::vector<double>& u_grid,
                                      const std::vector<double>& t_grid, std::size_t trials,
                                      Rng& rng, double tau) {
  MomentConstantFit fit;
  fit.u_grid = u_grid;
  for (double u : u_grid) {
    double worst = 0.0;
    for (double t : t_grid) {
      worst = std::max(worst, gap_probability_estimate(law, tau, t, u, trials, rng).estimate);
    }
    fit.worst_gap.push_back(worst);
    fit.product.push_back(worst * moment_function_f(u, theta));
    fit.constant = std::max(fit.constant, fit.product.back());
  }
  return fit;
}

}  // namespace rcp
