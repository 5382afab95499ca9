#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <json.hpp>

namespace rcp {

struct DerivedConstants {
  int d = 1;
  double theta = 0.0;
  double beta = 0.0;             // d ln 2
  double alpha = 0.0;            // (2d ln2 + sqrt(theta^2 d ln2 / 2)) / 2
  double slack_quadratic = 0.0;  // 2 (alpha/theta)^2 - beta
  double slack_linear = 0.0;     // beta + d ln2 - alpha
};

// Throws PreconditionError when theta <= sqrt(8 d ln 2).
DerivedConstants derive_constants(int d, double theta);

// a_n = 2^n, b_n = exp((alpha/theta)^2 n^2), handled in log space.
struct ScaleSchedule {
  DerivedConstants k;
  double kappa = 0.0;      // (alpha/theta)^2
  std::size_t n_min = 1;   // first n >= 1 with b_n / 2 > 3 b_{n-1}

  double log_a(std::size_t n) const;
  double log_b(std::size_t n) const { return kappa * static_cast<double>(n * n); }
  double log_ratio(std::size_t n) const { return kappa * (2.0 * static_cast<double>(n) - 1.0); }
};

ScaleSchedule make_schedule(const DerivedConstants& k);

struct RecurrenceState {
  double c_spatial = 4.0;  // 4 * 36^(d-1)
  double c_temporal = 0.0; // (3^d + 2d 3^(d-1))^2
  double c_moment = 1.0;   // constant of the gap bound C / f(u)
};

RecurrenceState default_recurrence_state(int d, double c_moment);

// Quadratic coefficient c_spatial * ceil(b_n/b_{n-1})^2 + c_temporal, in log space.
double log_quadratic_coefficient(const ScaleSchedule& s, const RecurrenceState& st, std::size_t n);

struct QuarterBounds {
  double quadratic = 0.0;  // C(d,alpha,beta,theta) exp([2(alpha/theta)^2 - beta] n)
  double moment = 0.0;     // C_moment e^alpha exp((beta + d ln2 - alpha) n)
};

QuarterBounds quarter_bounds(const ScaleSchedule& s, const RecurrenceState& st, std::size_t n);

// Smallest n >= n_min with both quarter bounds <= 1/4 (they decrease in n
// once the slacks are negative). Empty if none below n_limit.
std::optional<std::size_t> find_n0(const ScaleSchedule& s, const RecurrenceState& st,
                                   std::size_t n_limit = 100000);

struct RecurrenceStep {
  std::size_t n = 0;
  double log_u = 0.0;       // ln u_n, -inf for 0
  double log_target = 0.0;  // -beta n
  bool pass = true;         // u_n <= exp(-beta n)
  QuarterBounds quarters;
};

struct RecurrenceRun {
  std::vector<RecurrenceStep> steps;
  bool start_pass = true;                    // u_n0 <= exp(-beta n0)
  std::optional<std::size_t> first_failure;  // first iterated n > n0 above its target
  // Exponent of the squared term relative to exp(-beta n) along the worst-case
  // iteration: 4 (alpha/theta)^2 - beta. Positive means the iteration cannot close.
  double squared_term_growth = 0.0;

  bool certified() const { return start_pass && !first_failure.has_value(); }
};

// Iterates u_n = min(1, q_n u_{n-1}^2 + C_moment 2^{dn} / f(b_{n-1})) with f(b_{n-1}) = e^{alpha(n-1)}.
RecurrenceRun iterate_recurrence(const ScaleSchedule& s, const RecurrenceState& st, std::size_t n0,
                                 double u_n0, std::size_t n_max);

struct Lambda0Bound {
  std::size_t n0 = 0;
  double log_b_n0 = 0.0;
  double log_edges = 0.0;  // ln N, N = d 2^n0 (2^n0 + 1)^(d-1)
  double log_lambda0 = 0.0;
  double log10_lambda0 = 0.0;
  double lambda0 = 0.0;    // exp(log_lambda0); may underflow to 0 in double precision

  bool positive() const;
};

// Largest lambda with 1 - exp(-lambda b_n0 N) + e^{-beta n0}/4 <= e^{-beta n0}/2.
// Throws PreconditionError when n0 is below n_min or violates the quarter bounds.
Lambda0Bound lambda0_bound(const ScaleSchedule& s, const RecurrenceState& st, std::size_t n0);

nlohmann::json to_json(const DerivedConstants& k);
nlohmann::json to_json(const RecurrenceRun& run);
nlohmann::json to_json(const Lambda0Bound& b);

}  // namespace rcp
