#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <json.hpp>

#include "rcp/renewal/law.hpp"

namespace rcp {

// R_{k+1} = R_k + R_k / (ln R_k)^alpha_scale, r_0 = R_0, r_k = R_k - R_{k-1},
// M_k = ln r_k, l_k = ln R_k, for k = 0..K.
struct TunnelSchedule {
  double alpha_scale = 0.5;
  std::size_t depth = 0;
  std::vector<double> R;
  std::vector<double> r;
  std::vector<double> M;
  std::vector<double> ell;
};

// Throws DomainError for R0 <= e and PreconditionError unless 0 < alpha_scale < 1.
TunnelSchedule tunnel_schedule(double R0, double alpha_scale, std::size_t depth);
// Same schedule parameterised by l_0 = ln R_0.
TunnelSchedule tunnel_schedule_log(double ell0, double alpha_scale, std::size_t depth);

// l_k >= (l_0 + k)^beta_ell for all k <= K. Requires beta_ell < 1 / (1 + alpha_scale).
bool ell_growth_check(const TunnelSchedule& s, double beta_ell);

// Midpoint of (e^{-alpha_scale}, 1).
double default_theta_geo(double alpha_scale);

struct TunnelLevelTerms {
  double geometric = 0.0;  // theta_geo^{M_k}
  double crossing = 0.0;   // M_k exp(-lambda r_k / M_k)
  double age = 0.0;        // M_k^2 exp(-lambda M_k)
  double renewal = 0.0;    // 2 M_k^4 / L(R_k)
  double total() const { return geometric + crossing + age + renewal; }
};

TunnelLevelTerms tunnel_level_terms(const TunnelSchedule& s, std::size_t k, double lambda,
                                    double theta_geo);

struct TunnelBoundSum {
  std::vector<TunnelLevelTerms> levels;
  double partial = 0.0;  // sum over k < depth
  double tail_ratio = 0.0;
  double tail = 0.0;     // geometric majorant beyond depth
  double total = 0.0;
  bool finite = true;    // false when the fitted ratio is >= 1
};

// Requires lambda > 0 and theta_geo in (e^{-alpha_scale}, 1).
TunnelBoundSum tunnel_bound_sum(const TunnelSchedule& s, double lambda, double theta_geo);

struct R0Search {
  bool found = false;
  double ell0 = 0.0;  // ln R0
  double R0 = 0.0;
  TunnelBoundSum sum;
};

// Smallest l_0 on the grid ell_lo, ell_lo + ell_step, ... <= ell_hi with bound sum < eps.
R0Search find_R0(double lambda, double eps, double alpha_scale, double theta_geo,
                 std::size_t depth = 200, double ell_lo = 2.0, double ell_hi = 600.0,
                 double ell_step = 1.0);

// m(t / (ln t)^a) / m(t), compared against e^{-a} for slowly varying tails.
double integrated_tail_ratio(const InterarrivalLaw& law, double t, double a);

nlohmann::json to_json(const TunnelBoundSum& s);

}  // namespace rcp
