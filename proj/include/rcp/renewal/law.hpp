#pragma once

#include <string>
#include <vector>

#include "rcp/rng.hpp"

namespace rcp {

enum class LawFamily { exponential, deterministic, pareto_tail, example_log_sv, empirical };

// Interarrival (cure) distribution on (0, inf). Immutable after construction.
class InterarrivalLaw {
 public:
  static InterarrivalLaw exponential(double rate);
  static InterarrivalLaw deterministic(double value);
  // Tail min(1, (scale/t)^alpha), alpha in (0,1).
  static InterarrivalLaw pareto_tail(double alpha, double scale);
  // Tail 1 on [0,t0], K L(t)/t beyond, L(t) = exp(ln t / ln ln t), K = t0/L(t0).
  static InterarrivalLaw example_log_sv(double t0);
  // Piecewise-linear cdf through a sorted table with F(x_i) = i/(n-1).
  static InterarrivalLaw empirical(std::vector<double> table);

  LawFamily family() const { return family_; }
  std::string family_name() const;

  double cdf(double t) const { return 1.0 - tail(t); }
  double tail(double t) const;
  // ln of the tail; finite far beyond the range where tail() underflows.
  double log_tail(double t) const;

  bool has_density() const;
  double density(double t) const;
  bool has_hazard() const;
  double hazard(double t) const;

  // Solves tail(t) = u for u in (0,1); the inverse-cdf sampler applied to 1-u.
  double inverse_tail(double u) const;
  double sample(Rng& rng) const { return inverse_tail(rng.u01()); }

  // E[X]; +inf for the heavy-tailed families.
  double mean() const;
  // Points where the tail or its derivative is not smooth.
  std::vector<double> breakpoints() const;

  // Slowly varying factor of the log-SV example.
  static double log_sv_L(double t);

  double rate() const { return p0_; }
  double value() const { return p0_; }
  double alpha() const { return p0_; }
  double scale() const { return p1_; }
  double t0() const { return p0_; }
  double log_sv_K() const { return p1_; }
  const std::vector<double>& table() const { return table_; }

 private:
  InterarrivalLaw(LawFamily f, double p0, double p1) : family_(f), p0_(p0), p1_(p1) {}

  double empirical_cdf(double t) const;

  LawFamily family_;
  double p0_ = 0.0;
  double p1_ = 0.0;
  std::vector<double> table_;
};

// Samples one interarrival time.
inline double sample_interarrival(const InterarrivalLaw& law, Rng& rng) { return law.sample(rng); }

}  // namespace rcp
