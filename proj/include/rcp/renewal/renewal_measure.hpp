#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "rcp/renewal/law.hpp"
#include "rcp/rng.hpp"

namespace rcp {

struct RenewalGridOptions {
  double fine_step = 0.25;     // uniform grid step near the origin
  double fine_limit = 2000.0;  // end of the uniform part
  double ratio = 1.02;         // geometric ratio beyond fine_limit
  double max_time = 1e6;       // grid covers [0, max_time]
  double far_fraction = 1e-3;  // cells below far_fraction * x enter through a Taylor expansion
};

// Tabulated m(t) = int_0^t tail with local Simpson refinement off the grid.
class IntegratedTailTable {
 public:
  IntegratedTailTable(const InterarrivalLaw& law, std::vector<double> grid, double fine_step,
                      std::size_t fine_points);

  double operator()(double t) const;
  // m(b) - m(a) for a <= b, accurate when b - a is small relative to a.
  double diff(double a, double b) const;
  // Solves m(w) - m(a) = target for w in [a, b].
  double invert(double a, double b, double target) const;

 private:
  double simpson(double a, double b) const;

  const InterarrivalLaw* law_;
  std::vector<double> grid_;
  std::vector<double> m_;
  std::vector<double> breaks_;
  double fine_step_;
  std::size_t fine_points_;
};

// Renewal function U (atom 1 at the origin included) for a continuous law,
// from the identity tail(x) + int_(0,x] tail(x-s) dU(s) = 1 solved with a
// piecewise-constant renewal density on a mixed uniform/geometric grid.
class RenewalFunction {
 public:
  RenewalFunction(const InterarrivalLaw& law, const RenewalGridOptions& opt = {});
  RenewalFunction(const RenewalFunction&) = delete;
  RenewalFunction& operator=(const RenewalFunction&) = delete;

  double U(double x) const;
  double density(double x) const;
  // tail(t) + int_(0,t] tail(t-s) dU(s); equals 1 for the exact U.
  double mass_check(double t) const;

  const InterarrivalLaw& law() const { return law_; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& cell_density() const { return dens_; }
  const IntegratedTailTable& m_table() const { return *mt_; }
  double max_time() const { return grid_.back(); }

 private:
  std::size_t cell_of(double x) const;

  InterarrivalLaw law_;
  std::vector<double> grid_;
  std::vector<double> dens_;  // dens_[i]: density on (grid_[i-1], grid_[i]]
  std::vector<double> cum_;   // cum_[i] = U(grid_[i]) - 1
  std::size_t fine_points_ = 0;
  std::unique_ptr<IntegratedTailTable> mt_;
};

struct AgeOvershootDraw {
  double age = 0.0;
  double overshoot = 0.0;
  bool renewed = false;  // false when no renewal occurred in (0, t]
};

// Exact joint law of (age, overshoot) at a fixed time t for a renewal process
// started at 0, using P(last renewal in ds) = tail(t-s) U(ds).
class AgeOvershootSampler {
 public:
  AgeOvershootSampler(const RenewalFunction& rf, double t);

  AgeOvershootDraw sample(Rng& rng) const;
  double time() const { return t_; }
  // Total mass before normalisation minus one.
  double mass_defect() const { return total_ - 1.0; }

 private:
  const RenewalFunction* rf_;
  double t_;
  double atom_;
  std::vector<double> cdf_;  // cumulative mass over cells 1..n, after the atom
  double total_;
};

// Reference sampler: simulates the renewal sequence until it passes t.
AgeOvershootDraw sample_age_overshoot_exact(const InterarrivalLaw& law, double t, Rng& rng);

// Overshoot given an age w: X - w with X distributed as the law conditioned on X > w.
double sample_residual(const InterarrivalLaw& law, double age, Rng& rng);

}  // namespace rcp
