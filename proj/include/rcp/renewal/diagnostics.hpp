#pragma once

#include <cstddef>
#include <vector>

#include "rcp/renewal/law.hpp"
#include "rcp/renewal/track.hpp"
#include "rcp/rng.hpp"
#include "rcp/stats.hpp"

namespace rcp {

struct ProbabilityEstimate {
  double estimate = 0.0;
  Interval ci;
  std::size_t successes = 0;
  std::size_t trials = 0;
};

struct MeanEstimate {
  double mean = 0.0;
  double sd = 0.0;
  Interval ci;
  std::size_t trials = 0;
};

// f(x) = exp(theta sqrt(ln x)) for x >= 1, else 0.
double moment_function_f(double x, double theta);

// Smallest admissible moment exponent sqrt(8 d ln 2).
double theta_min(int d);

// m(t) = int_0^t tail(s) ds by adaptive Gauss-Kronrod quadrature.
double integrated_tail_m(const InterarrivalLaw& law, double t, double rel_tol = 1e-8);

// int_a^b tail(s) ds, split at the law's breakpoints.
double integrated_tail_between(const InterarrivalLaw& law, double a, double b,
                               double rel_tol = 1e-10);

// Solves m(t) = y by bisection to absolute tolerance abs_factor * t.
double inverse_integrated_tail(const InterarrivalLaw& law, double y, double rel_tol = 1e-8,
                               double abs_factor = 1e-9);

// P(no mark in [t, t+u]) for tracks started at tau, with a Wilson interval.
ProbabilityEstimate gap_probability_estimate(const InterarrivalLaw& law, double tau, double t,
                                             double u, std::size_t trials, Rng& rng);

// E|R cap (x, x+h]| for tracks started at 0.
MeanEstimate renewal_measure_estimate(const InterarrivalLaw& law, double x, double h,
                                      std::size_t trials, Rng& rng);

struct NegligibilityResult {
  double value = 0.0;
  double ratio = 0.0;  // value / (tail(t)/t)
};

// int_1^{delta t} f(t-z) / (z tail(z)^2) dz.
NegligibilityResult negligibility_integral(const InterarrivalLaw& law, double delta, double t,
                                           double rel_tol = 1e-6);

struct MomentConstantFit {
  double constant = 0.0;          // max over u of (worst-t gap estimate) * f(u)
  std::vector<double> u_grid;
  std::vector<double> worst_gap;  // per u, max over the t grid
  std::vector<double> product;    // worst_gap * f(u)
};

// Empirical stand-in for the moment constant C(mu, theta).
MomentConstantFit fit_moment_constant(const InterarrivalLaw& law, double theta,
                                      const std::vector<double>& u_grid,
                                      const std::vector<double>& t_grid, std::size_t trials,
                                      Rng& rng, double tau = 0.0);

}  // namespace rcp
