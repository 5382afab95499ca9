#include "rcp/renewal/law.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rcp/errors.hpp"

namespace rcp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// d/dt ln(tail) = -(1/t) * logsv_hazard_factor(t) for t > t0.
double logsv_hazard_factor(double t) {
  const double v = std::log(std::log(t));
  return 1.0 - (v - 1.0) / (v * v);
}

}  // namespace

InterarrivalLaw InterarrivalLaw::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw DomainError("Exponential: rate must be > 0");
  return {LawFamily::exponential, rate, 0.0};
}

InterarrivalLaw InterarrivalLaw::deterministic(double value) {
  if (!(value > 0.0) || !std::isfinite(value)) throw DomainError("Deterministic: value must be > 0");
  return {LawFamily::deterministic, value, 0.0};
}

InterarrivalLaw InterarrivalLaw::pareto_tail(double alpha, double scale) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("ParetoTail: alpha must lie in (0,1)");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("ParetoTail: scale must be > 0");
  return {LawFamily::pareto_tail, alpha, scale};
}

double InterarrivalLaw::log_sv_L(double t) { return std::exp(std::log(t) / std::log(std::log(t))); }

InterarrivalLaw InterarrivalLaw::example_log_sv(double t0) {
  if (!(t0 > std::exp(1.0)) || !std::isfinite(t0)) throw DomainError("ExampleLogSV: t0 must exceed e");
  // The tail is monotone beyond t0 iff the hazard factor stays positive.
  for (double x = std::log(t0); x < 700.0; x *= 1.05) {
    if (logsv_hazard_factor(std::exp(x)) <= 0.0) throw DomainError("ExampleLogSV: tail not monotone for this t0");
  }
  return {LawFamily::example_log_sv, t0, t0 / log_sv_L(t0)};
}

InterarrivalLaw InterarrivalLaw::empirical(std::vector<double> table) {
  if (table.size() < 2) throw DomainError("Empirical: table needs at least two values");
  if (!(table.front() >= 0.0)) throw DomainError("Empirical: values must be non-negative");
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (!(table[i] > table[i - 1])) throw DomainError("Empirical: table must be strictly increasing");
  }
  InterarrivalLaw law(LawFamily::empirical, 0.0, 0.0);
  law.table_ = std::move(table);
  return law;
}

std::string InterarrivalLaw::family_name() const {
  switch (family_) {
    case LawFamily::exponential: return "Exponential";
    case LawFamily::deterministic: return "Deterministic";
    case LawFamily::pareto_tail: return "ParetoTail";
    case LawFamily::example_log_sv: return "ExampleLogSV";
    case LawFamily::empirical: return "Empirical";
  }
  return "?";
}

double InterarrivalLaw::empirical_cdf(double t) const {
  const auto& x = table_;
  if (t <= x.front()) return 0.0;
  if (t >= x.back()) return 1.0;
  const auto it = std::upper_bound(x.begin(), x.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
  const double frac = (t - x[i]) / (x[i + 1] - x[i]);
  return (static_cast<double>(i) + frac) / static_cast<double>(x.size() - 1);
}

double InterarrivalLaw::tail(double t) const {
  if (t <= 0.0) return 1.0;
  switch (family_) {
    case LawFamily::exponential: return std::exp(-p0_ * t);
    case LawFamily::deterministic: return t < p0_ ? 1.0 : 0.0;
    case LawFamily::pareto_tail: return t <= p1_ ? 1.0 : std::pow(p1_ / t, p0_);
    case LawFamily::example_log_sv: return t <= p0_ ? 1.0 : std::exp(log_tail(t));
    case LawFamily::empirical: return 1.0 - empirical_cdf(t);
  }
  return 1.0;
}

double InterarrivalLaw::log_tail(double t) const {
  if (t <= 0.0) return 0.0;
  switch (family_) {
    case LawFamily::exponential: return -p0_ * t;
    case LawFamily::pareto_tail: return t <= p1_ ? 0.0 : p0_ * (std::log(p1_) - std::log(t));
    case LawFamily::example_log_sv: {
      if (t <= p0_) return 0.0;
      const double x = std::log(t);
      return std::log(p1_) + x / std::log(x) - x;
    }
    default: {
      const double s = tail(t);
      return s > 0.0 ? std::log(s) : -kInf;
    }
  }
}

bool InterarrivalLaw::has_density() const { return family_ != LawFamily::deterministic; }

double InterarrivalLaw::density(double t) const {
  if (t < 0.0) return 0.0;
  switch (family_) {
    case LawFamily::exponential: return p0_ * std::exp(-p0_ * t);
    case LawFamily::deterministic: throw UnsupportedLawError("Deterministic law has no density");
    case LawFamily::pareto_tail: return t <= p1_ ? 0.0 : p0_ * std::pow(p1_ / t, p0_) / t;
    case LawFamily::example_log_sv:
      return t <= p0_ ? 0.0 : tail(t) * logsv_hazard_factor(t) / t;
    case LawFamily::empirical: {
      const auto& x = table_;
      if (t < x.front() || t >= x.back()) return 0.0;
      const auto it = std::upper_bound(x.begin(), x.end(), t);
      const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
      return 1.0 / (static_cast<double>(x.size() - 1) * (x[i + 1] - x[i]));
    }
  }
  return 0.0;
}

bool InterarrivalLaw::has_hazard() const { return has_density(); }

double InterarrivalLaw::hazard(double t) const {
  switch (family_) {
    case LawFamily::exponential: return p0_;
    case LawFamily::deterministic: throw UnsupportedLawError("Deterministic law has no hazard rate");
    case LawFamily::pareto_tail: return t <= p1_ ? 0.0 : p0_ / t;
    case LawFamily::example_log_sv: return t <= p0_ ? 0.0 : logsv_hazard_factor(t) / t;
    case LawFamily::empirical: {
      const double s = tail(t);
      return s > 0.0 ? density(t) / s : kInf;
    }
  }
  return 0.0;
}

double InterarrivalLaw::inverse_tail(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("inverse_tail: u must lie in (0,1)");
  switch (family_) {
    case LawFamily::exponential: return -std::log(u) / p0_;
    case LawFamily::deterministic: return p0_;
    case LawFamily::pareto_tail: return p1_ * std::pow(u, -1.0 / p0_);
    case LawFamily::example_log_sv: {
      // Solve ln K + x/ln x - x = ln u for x = ln t > ln t0 by safeguarded Newton.
      const double target = std::log(u);
      const double x0 = std::log(p0_);
      const double lnK = std::log(p1_);
      auto h = [&](double x) { return lnK + x / std::log(x) - x - target; };
      double lo = x0, hi = x0 + 1.0;
      while (h(hi) > 0.0) {
        lo = hi;
        hi = x0 + 2.0 * (hi - x0);
      }
      double x = 0.5 * (lo + hi);
      for (int it = 0; it < 200; ++it) {
        const double hx = h(x);
        if (hx > 0.0) lo = x; else hi = x;
        const double lx = std::log(x);
        const double dh = (lx - 1.0) / (lx * lx) - 1.0;
        double nx = x - hx / dh;
        if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
        if (std::abs(nx - x) <= 1e-15 * x) {
          x = nx;
          break;
        }
        x = nx;
      }
      return std::exp(x);
    }
    case LawFamily::empirical: {
      const double p = (1.0 - u) * static_cast<double>(table_.size() - 1);
      const std::size_t i = std::min(static_cast<std::size_t>(p), table_.size() - 2);
      const double frac = p - static_cast<double>(i);
      return table_[i] + frac * (table_[i + 1] - table_[i]);
    }
  }
  return 0.0;
}

double InterarrivalLaw::mean() const {
  switch (family_) {
    case LawFamily::exponential: return 1.0 / p0_;
    case LawFamily::deterministic: return p0_;
    case LawFamily::pareto_tail:
    case LawFamily::example_log_sv: return kInf;
    case LawFamily::empirical: {
      double s = 0.0;
      for (std::size_t i = 0; i + 1 < table_.size(); ++i) s += 0.5 * (table_[i] + table_[i + 1]);
      return s / static_cast<double>(table_.size() - 1);
    }
  }
  return kInf;
}

std::vector<double> InterarrivalLaw::breakpoints() const {
  switch (family_) {
    case LawFamily::exponential: return {};
    case LawFamily::deterministic: return {p0_};
    case LawFamily::pareto_tail: return {p1_};
    case LawFamily::example_log_sv: return {p0_};
    case LawFamily::empirical: return table_;
  }
  return {};
}

}  // namespace rcp
