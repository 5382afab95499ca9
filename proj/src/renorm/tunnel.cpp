#include "rcp/renorm/tunnel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rcp/errors.hpp"
#include "rcp/renewal/diagnostics.hpp"

namespace rcp {

TunnelSchedule tunnel_schedule_log(double ell0, double alpha_scale, std::size_t depth) {
  if (!(ell0 > 1.0) || !std::isfinite(ell0)) throw DomainError("tunnel_schedule: R0 must exceed e");
  if (!(alpha_scale > 0.0 && alpha_scale < 1.0)) {
    throw PreconditionError("tunnel_schedule: alpha_scale must lie in (0,1)");
  }
  TunnelSchedule s;
  s.alpha_scale = alpha_scale;
  s.depth = depth;
  s.ell.push_back(ell0);
  s.M.push_back(ell0);
  for (std::size_t k = 0; k < depth; ++k) {
    const double l = s.ell.back();
    const double step = std::pow(l, -alpha_scale);
    s.ell.push_back(l + std::log1p(step));
    s.M.push_back(l - alpha_scale * std::log(l));
  }
  for (std::size_t k = 0; k <= depth; ++k) {
    s.R.push_back(std::exp(s.ell[k]));
    s.r.push_back(std::exp(s.M[k]));
  }
  if (!std::isfinite(s.R.back())) throw DomainError("tunnel_schedule: R_K overflows double precision");
  return s;
}

TunnelSchedule tunnel_schedule(double R0, double alpha_scale, std::size_t depth) {
  if (!(R0 > std::exp(1.0))) throw DomainError("tunnel_schedule: R0 must exceed e");
  return tunnel_schedule_log(std::log(R0), alpha_scale, depth);
}

bool ell_growth_check(const TunnelSchedule& s, double beta_ell) {
  if (!(beta_ell > 0.0 && beta_ell < 1.0 / (1.0 + s.alpha_scale))) {
    throw PreconditionError("ell_growth_check: beta must lie in (0, 1/(1+alpha_scale))");
  }
  const double ell0 = s.ell.front();
  for (std::size_t k = 0; k < s.ell.size(); ++k) {
    if (s.ell[k] < std::pow(ell0 + static_cast<double>(k), beta_ell)) return false;
  }
  return true;
}

double default_theta_geo(double alpha_scale) { return 0.5 * (1.0 + std::exp(-alpha_scale)); }

TunnelLevelTerms tunnel_level_terms(const TunnelSchedule& s, std::size_t k, double lambda,
                                    double theta_geo) {
  const double M = s.M[k];
  TunnelLevelTerms t;
  t.geometric = std::exp(M * std::log(theta_geo));
  t.crossing = M * std::exp(-lambda * s.r[k] / M);
  t.age = M * M * std::exp(-lambda * M);
  // L(R) = exp(l / ln l)
  t.renewal = 2.0 * std::pow(M, 4) * std::exp(-s.ell[k] / std::log(s.ell[k]));
  return t;
}

TunnelBoundSum tunnel_bound_sum(const TunnelSchedule& s, double lambda, double theta_geo) {
  if (!(lambda > 0.0)) throw DomainError("tunnel_bound_sum: lambda must be > 0");
  if (!(theta_geo > std::exp(-s.alpha_scale) && theta_geo < 1.0)) {
    throw PreconditionError("tunnel_bound_sum: theta_geo must lie in (exp(-alpha_scale), 1)");
  }
  TunnelBoundSum out;
  for (std::size_t k = 0; k < s.depth; ++k) {
    out.levels.push_back(tunnel_level_terms(s, k, lambda, theta_geo));
    out.partial += out.levels.back().total();
  }
  const std::size_t n = out.levels.size();
  if (n >= 2) {
    const std::size_t first = n > 10 ? n - 10 : 0;
    double ratio = 0.0;
    for (std::size_t k = first + 1; k < n; ++k) {
      ratio = std::max(ratio, out.levels[k].total() / out.levels[k - 1].total());
    }
    out.tail_ratio = ratio;
    if (ratio < 1.0) {
      out.tail = out.levels.back().total() * ratio / (1.0 - ratio);
    } else {
      out.finite = false;
      out.tail = INFINITY;
    }
  }
  out.total = out.partial + out.tail;
  return out;
}

R0Search find_R0(double lambda, double eps, double alpha_scale, double theta_geo, std::size_t depth,
                 double ell_lo, double ell_hi, double ell_step) {
  R0Search res;
  for (double ell = ell_lo; ell <= ell_hi + 1e-9; ell += ell_step) {
    TunnelSchedule s;
    try {
      s = tunnel_schedule_log(ell, alpha_scale, depth);
    } catch (const DomainError&) {
      break;
    }
    auto sum = tunnel_bound_sum(s, lambda, theta_geo);
    if (sum.finite && sum.total < eps) {
      res.found = true;
      res.ell0 = ell;
      res.R0 = s.R.front();
      res.sum = std::move(sum);
      return res;
    }
  }
  return res;
}

double integrated_tail_ratio(const InterarrivalLaw& law, double t, double a) {
  if (!(t > std::exp(1.0))) throw DomainError("integrated_tail_ratio: t must exceed e");
  if (!(a >= 0.0)) throw DomainError("integrated_tail_ratio: a must be >= 0");
  const double inner = t / std::pow(std::log(t), a);
  return integrated_tail_m(law, inner) / integrated_tail_m(law, t);
}

nlohmann::json to_json(const TunnelBoundSum& s) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& t : s.levels) {
    levels.push_back({{"geometric", t.geometric}, {"crossing", t.crossing}, {"age", t.age},
                      {"renewal", t.renewal}, {"total", t.total()}});
  }
  return {{"partial", s.partial}, {"tail_ratio", s.tail_ratio},
          {"tail", std::isfinite(s.tail) ? nlohmann::json(s.tail) : nlohmann::json("inf")},
          {"total", std::isfinite(s.total) ? nlohmann::json(s.total) : nlohmann::json("inf")},
          {"finite", s.finite}, {"levels", levels}};
}

}  // namespace rcp
