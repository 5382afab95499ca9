#include "rcp/renorm/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rcp/errors.hpp"
#include "rcp/renewal/diagnostics.hpp"

namespace rcp {

namespace {

const double kLn2 = std::log(2.0);
const double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::fabs(a - b)));
}

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

}  // namespace

DerivedConstants derive_constants(int d, double theta) {
  if (d < 1) throw DomainError("derive_constants: d must be >= 1");
  const double tmin = theta_min(d);
  if (!(theta > tmin)) {
    throw PreconditionError("derive_constants: theta = " + std::to_string(theta) +
                            " must exceed sqrt(8 d ln 2) = " + std::to_string(tmin));
  }
  DerivedConstants k;
  k.d = d;
  k.theta = theta;
  k.beta = d * kLn2;
  k.alpha = 0.5 * (2.0 * d * kLn2 + std::sqrt(theta * theta * d * kLn2 / 2.0));
  const double r = k.alpha / theta;
  k.slack_quadratic = 2.0 * r * r - k.beta;
  k.slack_linear = k.beta + d * kLn2 - k.alpha;
  return k;
}

double ScaleSchedule::log_a(std::size_t n) const { return static_cast<double>(n) * kLn2; }

ScaleSchedule make_schedule(const DerivedConstants& k) {
  ScaleSchedule s;
  s.k = k;
  s.kappa = (k.alpha / k.theta) * (k.alpha / k.theta);
  // b_n / b_{n-1} = exp(kappa (2n-1)) > 6
  std::size_t n = 1;
  while (s.log_ratio(n) <= std::log(6.0)) ++n;
  s.n_min = n;
  return s;
}

RecurrenceState default_recurrence_state(int d, double c_moment) {
  RecurrenceState st;
  st.c_spatial = 4.0 * std::pow(36.0, d - 1);
  const double lin = std::pow(3.0, d) + 2.0 * d * std::pow(3.0, d - 1);
  st.c_temporal = lin * lin;
  st.c_moment = c_moment;
  return st;
}

double log_quadratic_coefficient(const ScaleSchedule& s, const RecurrenceState& st, std::size_t n) {
  const double lr = s.log_ratio(n);
  const double log_ceil = lr < 36.0 ? std::log(std::ceil(std::exp(lr))) : lr;
  return log_add(safe_log(st.c_spatial) + 2.0 * log_ceil, safe_log(st.c_temporal));
}

QuarterBounds quarter_bounds(const ScaleSchedule& s, const RecurrenceState& st, std::size_t n) {
  const auto& k = s.k;
  const double nn = static_cast<double>(n);
  QuarterBounds q;
  const double c_quad = (st.c_spatial + st.c_temporal) * std::exp(2.0 * k.beta - s.kappa);
  q.quadratic = c_quad * std::exp(k.slack_quadratic * nn);
  q.moment = st.c_moment * std::exp(k.alpha) * std::exp(k.slack_linear * nn);
  return q;
}

std::optional<std::size_t> find_n0(const ScaleSchedule& s, const RecurrenceState& st,
                                   std::size_t n_limit) {
  if (s.k.slack_quadratic >= 0.0 || s.k.slack_linear >= 0.0) return std::nullopt;
  for (std::size_t n = s.n_min; n <= n_limit; ++n) {
    const auto q = quarter_bounds(s, st, n);
    if (q.quadratic <= 0.25 && q.moment <= 0.25) return n;
  }
  return std::nullopt;
}

RecurrenceRun iterate_recurrence(const ScaleSchedule& s, const RecurrenceState& st, std::size_t n0,
                                 double u_n0, std::size_t n_max) {
  if (!(u_n0 >= 0.0 && u_n0 <= 1.0)) throw DomainError("iterate_recurrence: u_n0 must lie in [0,1]");
  const auto& k = s.k;
  RecurrenceRun run;
  run.squared_term_growth = 4.0 * s.kappa - k.beta;
  double log_u = safe_log(u_n0);
  auto record = [&](std::size_t n) {
    RecurrenceStep step;
    step.n = n;
    step.log_u = log_u;
    step.log_target = -k.beta * static_cast<double>(n);
    step.pass = log_u <= step.log_target + 1e-12;
    step.quarters = quarter_bounds(s, st, n);
    if (!step.pass && n > n0 && !run.first_failure) run.first_failure = n;
    run.steps.push_back(step);
  };
  record(n0);
  run.start_pass = run.steps.front().pass;
  for (std::size_t n = n0 + 1; n <= n_max; ++n) {
    const double nn = static_cast<double>(n);
    const double quad = log_u == kNegInf ? kNegInf : log_quadratic_coefficient(s, st, n) + 2.0 * log_u;
    const double moment = safe_log(st.c_moment) + k.d * kLn2 * nn - k.alpha * (nn - 1.0);
    log_u = std::min(0.0, log_add(quad, moment));
    record(n);
  }
  return run;
}

bool Lambda0Bound::positive() const { return std::isfinite(log_lambda0); }

Lambda0Bound lambda0_bound(const ScaleSchedule& s, const RecurrenceState& st, std::size_t n0) {
  if (n0 < s.n_min) {
    throw PreconditionError("lambda0_bound: n0 = " + std::to_string(n0) + " is below n_min = " +
                            std::to_string(s.n_min) + " (b_n/2 > 3 b_{n-1} fails)");
  }
  const auto q = quarter_bounds(s, st, n0);
  if (!(q.quadratic <= 0.25 && q.moment <= 0.25)) {
    throw PreconditionError("lambda0_bound: quarter bounds exceed 1/4 at n0 = " + std::to_string(n0));
  }
  const auto& k = s.k;
  const double nn = static_cast<double>(n0);
  Lambda0Bound b;
  b.n0 = n0;
  b.log_b_n0 = s.log_b(n0);
  b.log_edges = std::log(static_cast<double>(k.d)) + nn * kLn2 +
                (k.d - 1) * std::log(std::exp2(nn) + 1.0);
  const double slack = -std::log1p(-0.25 * std::exp(-k.beta * nn));
  b.log_lambda0 = std::log(slack) - b.log_b_n0 - b.log_edges;
  b.log10_lambda0 = b.log_lambda0 / std::log(10.0);
  b.lambda0 = std::exp(b.log_lambda0);
  return b;
}

nlohmann::json to_json(const DerivedConstants& k) {
  return {{"d", k.d}, {"theta", k.theta}, {"beta", k.beta}, {"alpha", k.alpha},
          {"slack_quadratic", k.slack_quadratic}, {"slack_linear", k.slack_linear}};
}

nlohmann::json to_json(const RecurrenceRun& run) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : run.steps) {
    steps.push_back({{"n", s.n}, {"log_u", std::isfinite(s.log_u) ? nlohmann::json(s.log_u) : nlohmann::json("-inf")},
                     {"log_target", s.log_target}, {"pass", s.pass},
                     {"quarter_quadratic", s.quarters.quadratic}, {"quarter_moment", s.quarters.moment}});
  }
  nlohmann::json j{{"certified", run.certified()}, {"start_pass", run.start_pass}, {"squared_term_growth", run.squared_term_growth},
                   {"steps", steps}};
  j["first_failure"] = run.first_failure ? nlohmann::json(*run.first_failure) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const Lambda0Bound& b) {
  return {{"n0", b.n0}, {"log_b_n0", b.log_b_n0}, {"log_N", b.log_edges},
          {"log_lambda0", b.log_lambda0}, {"log10_lambda0", b.log10_lambda0}, {"lambda0", b.lambda0},
          {"lambda0_positive", b.positive()}};
}

}  // namespace rcp
