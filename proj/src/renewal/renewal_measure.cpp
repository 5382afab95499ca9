#include "rcp/renewal/renewal_measure.hpp"

#include <algorithm>
#include <cmath>

#include "rcp/errors.hpp"
#include "rcp/renewal/diagnostics.hpp"

namespace rcp {

IntegratedTailTable::IntegratedTailTable(const InterarrivalLaw& law, std::vector<double> grid,
                                         double fine_step, std::size_t fine_points)
    : law_(&law), grid_(std::move(grid)), fine_step_(fine_step), fine_points_(fine_points) {
  breaks_ = law.breakpoints();
  m_.resize(grid_.size());
  m_[0] = 0.0;
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    m_[i] = m_[i - 1] + integrated_tail_between(law, grid_[i - 1], grid_[i]);
  }
}

double IntegratedTailTable::simpson(double a, double b) const {
  double sum = 0.0, lo = a;
  auto piece = [&](double x, double y) {
    const double mid = 0.5 * (x + y);
    return (y - x) / 6.0 * (law_->tail(x) + 4.0 * law_->tail(mid) + law_->tail(y));
  };
  for (double br : breaks_) {
    if (br > lo && br < b) {
      sum += piece(lo, br);
      lo = br;
    }
  }
  return sum + piece(lo, b);
}

double IntegratedTailTable::operator()(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= grid_.back()) return m_.back() + integrated_tail_between(*law_, grid_.back(), t);
  std::size_t k;
  if (t < grid_[fine_points_ - 1]) {
    k = std::min(static_cast<std::size_t>(t / fine_step_), fine_points_ - 1);
    while (k > 0 && grid_[k] > t) --k;
  } else {
    k = static_cast<std::size_t>(std::upper_bound(grid_.begin(), grid_.end(), t) - grid_.begin()) - 1;
  }
  return m_[k] + simpson(grid_[k], t);
}

double IntegratedTailTable::diff(double a, double b) const {
  if (b <= a) return 0.0;
  if (b - a <= 0.1 * a || b - a <= fine_step_) return simpson(a, b);
  return (*this)(b) - (*this)(a);
}

double IntegratedTailTable::invert(double a, double b, double target) const {
  double lo = a, hi = b;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (diff(a, mid) < target) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

RenewalFunction::RenewalFunction(const InterarrivalLaw& law, const RenewalGridOptions& opt)
    : law_(law) {
  if (!law_.has_density()) throw UnsupportedLawError("RenewalFunction: law needs a density");
  if (!(opt.fine_step > 0.0) || !(opt.ratio > 1.0) || !(opt.max_time > 0.0)) {
    throw DomainError("RenewalFunction: invalid grid options");
  }
  const double fine_end = std::min(opt.fine_limit, opt.max_time);
  const auto n_fine = static_cast<std::size_t>(std::ceil(fine_end / opt.fine_step));
  for (std::size_t k = 0; k <= n_fine; ++k) grid_.push_back(static_cast<double>(k) * opt.fine_step);
  fine_points_ = grid_.size();
  while (grid_.back() < opt.max_time) grid_.push_back(grid_.back() * opt.ratio);
  mt_ = std::make_unique<IntegratedTailTable>(law_, grid_, opt.fine_step, fine_points_);

  const std::size_t n = grid_.size();
  dens_.assign(n, 0.0);
  cum_.assign(n, 0.0);
  std::vector<double> cum1(n, 0.0);
  const IntegratedTailTable& mt = *mt_;

  // Kernel on the uniform part: m((k+1)h) - m(kh).
  std::vector<double> w(fine_points_, 0.0);
  for (std::size_t k = 0; k + 1 < fine_points_; ++k) w[k] = mt(grid_[k + 1]) - mt(grid_[k]);

  std::size_t far = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const double x = grid_[i];
    const double width = x - grid_[i - 1];
    double sum = 0.0, self = 0.0;
    if (i < fine_points_) {
      for (std::size_t j = 1; j < i; ++j) sum += dens_[j] * w[i - j];
      self = w[0];
    } else {
      while (far + 1 < i && grid_[far + 1] <= opt.far_fraction * x) ++far;
      sum = law_.tail(x) * cum_[far] + law_.density(x) * cum1[far];
      for (std::size_t j = far + 1; j < i; ++j) {
        sum += dens_[j] * mt.diff(x - grid_[j], x - grid_[j - 1]);
      }
      self = mt(width);
    }
    const double rhs = 1.0 - law_.tail(x) - sum;
    dens_[i] = self > 0.0 ? std::max(0.0, rhs / self) : 0.0;
    cum_[i] = cum_[i - 1] + dens_[i] * width;
    cum1[i] = cum1[i - 1] + dens_[i] * width * 0.5 * (x + grid_[i - 1]);
  }
}

std::size_t RenewalFunction::cell_of(double x) const {
  if (x < 0.0 || x > grid_.back()) throw DomainError("RenewalFunction: x outside the tabulated range");
  if (x <= 0.0) return 1;
  return static_cast<std::size_t>(std::lower_bound(grid_.begin(), grid_.end(), x) - grid_.begin());
}

double RenewalFunction::U(double x) const {
  if (x < 0.0) return 0.0;
  if (x == 0.0) return 1.0;
  const std::size_t k = cell_of(x);
  return 1.0 + cum_[k - 1] + dens_[k] * (x - grid_[k - 1]);
}

double RenewalFunction::density(double x) const { return dens_[cell_of(x)]; }

double RenewalFunction::mass_check(double t) const {
  const std::size_t k = cell_of(t);
  double total = law_.tail(t);
  for (std::size_t j = 1; j <= k; ++j) {
    const double hi = std::min(grid_[j], t);
    total += dens_[j] * mt_->diff(t - hi, t - grid_[j - 1]);
  }
  return total;
}

AgeOvershootSampler::AgeOvershootSampler(const RenewalFunction& rf, double t) : rf_(&rf), t_(t) {
  if (!(t > 0.0) || t > rf.max_time()) throw DomainError("AgeOvershootSampler: t outside the tabulated range");
  const auto& g = rf.grid();
  const auto& d = rf.cell_density();
  const auto& mt = rf.m_table();
  atom_ = rf.law().tail(t);
  double acc = 0.0;
  for (std::size_t j = 1; j < g.size() && g[j - 1] < t; ++j) {
    const double hi = std::min(g[j], t);
    acc += d[j] * mt.diff(t - hi, t - g[j - 1]);
    cdf_.push_back(acc);
  }
  total_ = atom_ + acc;
}

AgeOvershootDraw AgeOvershootSampler::sample(Rng& rng) const {
  const InterarrivalLaw& law = rf_->law();
  double v = rng.u01() * total_;
  AgeOvershootDraw r;
  if (v < atom_ || cdf_.empty()) {
    r.age = t_;
    r.overshoot = sample_residual(law, t_, rng);
    return r;
  }
  v -= atom_;
  std::size_t j = static_cast<std::size_t>(std::upper_bound(cdf_.begin(), cdf_.end(), v) - cdf_.begin());
  j = std::min(j, cdf_.size() - 1);
  const double prior = j == 0 ? 0.0 : cdf_[j - 1];
  const double mass = cdf_[j] - prior;
  const double frac = mass > 0.0 ? std::clamp((v - prior) / mass, 0.0, 1.0) : 0.5;
  const auto& g = rf_->grid();
  const double lo = g[j], hi = std::min(g[j + 1], t_);
  const double wa = t_ - hi, wb = t_ - lo;
  const auto& mt = rf_->m_table();
  r.age = mt.invert(wa, wb, frac * mt.diff(wa, wb));
  r.overshoot = sample_residual(law, r.age, rng);
  r.renewed = true;
  return r;
}

double sample_residual(const InterarrivalLaw& law, double age, Rng& rng) {
  if (age <= 0.0) return law.sample(rng);
  const double lt = law.log_tail(age);
  const double u = rng.u01() * std::exp(lt);
  if (!(u > 0.0)) throw DomainError("sample_residual: conditioning event has zero probability");
  const double x = law.inverse_tail(u);
  return std::max(x - age, 0.0);
}

AgeOvershootDraw sample_age_overshoot_exact(const InterarrivalLaw& law, double t, Rng& rng) {
  double s = 0.0;
  bool renewed = false;
  while (true) {
    const double x = law.sample(rng);
    if (s + x > t) return {t - s, s + x - t, renewed};
    s += x;
    renewed = true;
  }
}

}  // namespace rcp
