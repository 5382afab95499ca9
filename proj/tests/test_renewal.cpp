#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "rcp/errors.hpp"
#include "rcp/renewal/diagnostics.hpp"
#include "rcp/renewal/law.hpp"
#include "rcp/renewal/law_json.hpp"
#include "rcp/renewal/renewal_measure.hpp"
#include "rcp/renewal/track.hpp"
#include "rcp/stats.hpp"

using namespace rcp;

TEST(Law, DeterministicSample) {
  Rng rng(1);
  EXPECT_EQ(InterarrivalLaw::deterministic(1.0).sample(rng), 1.0);
}

TEST(Law, ExponentialInverse) {
  EXPECT_NEAR(InterarrivalLaw::exponential(2.0).inverse_tail(0.5), std::log(2.0) / 2.0, 1e-12);
}

TEST(Law, ParetoInverse) {
  EXPECT_NEAR(InterarrivalLaw::pareto_tail(0.5, 1.0).inverse_tail(0.25), 16.0, 1e-9);
}

TEST(Law, TailsAreMonotone) {
  for (const auto& law : {InterarrivalLaw::exponential(1.0), InterarrivalLaw::pareto_tail(0.7, 1.0),
                          InterarrivalLaw::example_log_sv(20.0),
                          InterarrivalLaw::empirical({0.5, 1.0, 3.0, 4.0})}) {
    EXPECT_EQ(law.tail(0.0), 1.0) << law.family_name();
    double prev = 1.0;
    for (double t = 0.01; t < 1e7; t *= 1.3) {
      const double s = law.tail(t);
      EXPECT_LE(s, prev) << law.family_name() << " at " << t;
      prev = s;
    }
    EXPECT_LT(law.tail(1e12), 1e-2) << law.family_name();
  }
}

TEST(Law, ExampleLogSvIsContinuousAtT0) {
  const auto law = InterarrivalLaw::example_log_sv(20.0);
  EXPECT_NEAR(law.tail(20.0 * (1 + 1e-12)), 1.0, 1e-9);
}

TEST(Law, InvalidParametersRejected) {
  EXPECT_THROW(InterarrivalLaw::exponential(0.0), DomainError);
  EXPECT_THROW(InterarrivalLaw::pareto_tail(1.5, 1.0), DomainError);
  EXPECT_THROW(InterarrivalLaw::deterministic(-1.0), DomainError);
}

TEST(Law, JsonRoundTrip) {
  const auto law = InterarrivalLaw::pareto_tail(0.7, 2.0);
  const auto back = law_from_json(law_to_json(law));
  EXPECT_EQ(back.family(), LawFamily::pareto_tail);
  EXPECT_EQ(back.alpha(), 0.7);
  EXPECT_EQ(back.scale(), 2.0);
  EXPECT_THROW(law_from_json(nlohmann::json{{"family", "Weibull"}}), ConfigError);
  EXPECT_THROW(law_from_json(nlohmann::json{{"family", "Exponential"}, {"rate", 1.0}, {"x", 1}}), ConfigError);
}

TEST(Track, DeterministicFromZero) {
  Rng rng(1);
  const auto tr = generate_track(InterarrivalLaw::deterministic(1.0), 0.0, 3.5, rng);
  EXPECT_EQ(tr.marks, (std::vector<double>{1.0, 2.0, 3.0}));
}

TEST(Track, DeterministicFromNegativeStart) {
  Rng rng(1);
  const auto tr = generate_track(InterarrivalLaw::deterministic(1.0), -0.5, 2.0, rng);
  ASSERT_EQ(tr.marks.size(), 2u);
  EXPECT_NEAR(tr.marks[0], 0.5, 1e-15);
  EXPECT_NEAR(tr.marks[1], 1.5, 1e-15);
}

TEST(Track, ExponentialCountMean) {
  Rng rng(5);
  const double T = 20.0;
  std::vector<double> counts;
  for (int i = 0; i < 2000; ++i) {
    counts.push_back(static_cast<double>(generate_track(InterarrivalLaw::exponential(1.0), 0.0, T, rng).marks.size()));
  }
  const auto ms = mean_sd(counts);
  EXPECT_NEAR(ms.mean, T, 3.0 * std::sqrt(T / 2000.0));
}

TEST(Track, AgeOvershootDeterministic) {
  Rng rng(1);
  const auto tr = generate_track(InterarrivalLaw::deterministic(1.0), 0.0, 10.0, rng);
  const auto a = age_overshoot_at(tr, 2.7);
  EXPECT_NEAR(a.age, 0.7, 1e-12);
  EXPECT_NEAR(*a.overshoot, 0.3, 1e-12);
  EXPECT_EQ(a.index, 2u);
}

TEST(Track, AgeCountsStartAsRenewal) {
  const RenewalTrack tr{0.0, {0.5, 1.5}, 2.0};
  const auto a = age_overshoot_at(tr, 0.2);
  EXPECT_NEAR(a.age, 0.2, 1e-15);
  EXPECT_NEAR(*a.overshoot, 0.3, 1e-15);
  EXPECT_EQ(age_overshoot_at(tr, 1.5).age, 0.0);
  EXPECT_TRUE(age_overshoot_at(tr, 1.7).censored());
}

TEST(Track, EpsilonBlock) {
  RenewalTrack fine{0.0, {}, 1.0};
  for (int i = 1; i <= 9; ++i) fine.marks.push_back(0.1 * i);
  EXPECT_TRUE(is_epsilon_block(fine, 0.0, 1.0, 0.15));
  EXPECT_FALSE(is_epsilon_block(RenewalTrack{0.0, {}, 1.0}, 0.0, 1.0, 0.5));
  const RenewalTrack one{0.0, {0.3}, 1.0};
  EXPECT_TRUE(is_epsilon_block(one, 0.0, 1.0, 0.71));
  EXPECT_FALSE(is_epsilon_block(one, 0.0, 1.0, 0.69));
}

TEST(Track, CountMarksHalfOpen) {
  const RenewalTrack tr{0.0, {1.0, 2.0, 3.0}, 4.0};
  EXPECT_EQ(count_marks(tr, 1.0, 3.0), 2u);
  EXPECT_EQ(count_marks(tr, 0.0, 0.5), 0u);
}

TEST(HazardCoupling, EqualLawsGiveEqualTracks) {
  Rng rng(3);
  const auto e = InterarrivalLaw::exponential(1.0);
  for (int i = 0; i < 100; ++i) {
    const auto [a, b] = hazard_coupled_tracks(e, e, 0.0, 20.0, rng);
    EXPECT_EQ(a.marks, b.marks);
  }
}

TEST(HazardCoupling, SlowerTrackIsSubset) {
  Rng rng(4);
  const auto mu = InterarrivalLaw::exponential(1.0), nu = InterarrivalLaw::exponential(2.0);
  for (int i = 0; i < 1000; ++i) {
    const auto [a, b] = hazard_coupled_tracks(mu, nu, 0.0, 20.0, rng);
    EXPECT_TRUE(std::includes(b.marks.begin(), b.marks.end(), a.marks.begin(), a.marks.end()));
  }
}

TEST(HazardCoupling, DecreasingHazardMatchesInverseSampler) {
  Rng rng(6);
  const auto mu = InterarrivalLaw::pareto_tail(0.7, 1.0), nu = InterarrivalLaw::exponential(0.7);
  const double H = 200.0;
  std::vector<double> coupled, direct;
  std::size_t violations = 0;
  while (coupled.size() < 10000) {
    const auto [a, b] = hazard_coupled_tracks(mu, nu, 0.0, H, rng);
    if (!std::includes(b.marks.begin(), b.marks.end(), a.marks.begin(), a.marks.end())) ++violations;
    if (!a.marks.empty()) coupled.push_back(a.marks.front());
  }
  while (direct.size() < 10000) {
    const double x = mu.sample(rng);
    if (x <= H) direct.push_back(x);
  }
  EXPECT_EQ(violations, 0u);
  EXPECT_GT(ks_two_sample(coupled, direct).p_value, 0.01);
}

TEST(HazardCoupling, IncreasingDominatorRejected) {
  Rng rng(1);
  EXPECT_THROW(hazard_coupled_tracks(InterarrivalLaw::exponential(2.0), InterarrivalLaw::exponential(1.0), 0.0,
                                     5.0, rng),
               PreconditionError);
}

TEST(Moments, MomentFunction) {
  EXPECT_EQ(moment_function_f(1.0, 2.5), 1.0);
  EXPECT_NEAR(moment_function_f(std::exp(4.0), 2.5), std::exp(5.0), 1e-9);
  EXPECT_NEAR(theta_min(2), std::sqrt(16.0 * std::log(2.0)), 1e-12);
  EXPECT_NEAR(theta_min(2), 3.3302, 1e-4);
}

TEST(IntegratedTail, ClosedForms) {
  EXPECT_NEAR(integrated_tail_m(InterarrivalLaw::exponential(1.0), 1.0), 1.0 - std::exp(-1.0), 1e-10);
  const auto det = InterarrivalLaw::deterministic(1.0);
  for (double t : {0.3, 1.0, 2.5}) EXPECT_NEAR(integrated_tail_m(det, t), std::min(t, 1.0), 1e-10);
}

TEST(IntegratedTail, LogSvAgainstTrapezoid) {
  const auto law = InterarrivalLaw::example_log_sv(20.0);
  const double t = 1e6, h = 1e-2;
  const std::size_t n = static_cast<std::size_t>(t / h);
  long double sum = 0.5L * (law.tail(0.0) + law.tail(t));
  for (std::size_t i = 1; i < n; ++i) sum += law.tail(h * static_cast<double>(i));
  const double trap = static_cast<double>(sum * h);
  EXPECT_NEAR(integrated_tail_m(law, t) / trap, 1.0, 1e-4);
}

TEST(IntegratedTail, InverseRoundTrip) {
  const auto law = InterarrivalLaw::pareto_tail(0.7, 1.0);
  const double t = 12345.0;
  EXPECT_NEAR(inverse_integrated_tail(law, integrated_tail_m(law, t)) / t, 1.0, 1e-6);
}

TEST(GapProbability, ImpossibleGap) {
  Rng rng(1);
  const auto e = gap_probability_estimate(InterarrivalLaw::deterministic(1.0), 0.0, 0.1, 2.0, 500, rng);
  EXPECT_EQ(e.estimate, 0.0);
  EXPECT_EQ(e.successes, 0u);
}

TEST(GapProbability, ExponentialMemoryless) {
  Rng rng(2);
  const auto e = gap_probability_estimate(InterarrivalLaw::exponential(1.0), 0.0, 50.0, 1.0, 20000, rng);
  EXPECT_TRUE(e.ci.contains(std::exp(-1.0))) << e.estimate;
}

TEST(GapProbability, ParetoNonIncreasingInGap) {
  Rng rng(3);
  const auto law = InterarrivalLaw::pareto_tail(0.7, 1.0);
  double prev_est = 1.0, prev_hw = 0.0;
  for (double u : {1.0, 4.0, 16.0, 64.0, 256.0}) {
    const auto e = gap_probability_estimate(law, 0.0, 100.0, u, 5000, rng);
    EXPECT_LE(e.estimate, prev_est + prev_hw + e.ci.half_width()) << "u = " << u;
    prev_est = e.estimate;
    prev_hw = e.ci.half_width();
  }
}

TEST(RenewalMeasure, ExponentialUnitRate) {
  Rng rng(4);
  const auto e = renewal_measure_estimate(InterarrivalLaw::exponential(1.0), 5.0, 1.0, 20000, rng);
  EXPECT_TRUE(e.ci.contains(1.0)) << e.mean;
}

TEST(RenewalMeasure, DeterministicExact) {
  Rng rng(4);
  const auto e = renewal_measure_estimate(InterarrivalLaw::deterministic(1.0), 2.5, 1.0, 100, rng);
  EXPECT_EQ(e.mean, 1.0);
  EXPECT_EQ(e.sd, 0.0);
}

TEST(RenewalMeasure, ParetoScalingStabilizes) {
  Rng rng(5);
  const auto law = InterarrivalLaw::pareto_tail(0.7, 1.0);
  const double a = renewal_measure_estimate(law, 1e4, 1.0, 100000, rng).mean * std::pow(1e4, 0.3);
  const double b = renewal_measure_estimate(law, 1e5, 1.0, 100000, rng).mean * std::pow(1e5, 0.3);
  EXPECT_NEAR(b / a, 1.0, 0.15) << a << " " << b;
}

TEST(Negligibility, EmptyDomain) {
  const auto r = negligibility_integral(InterarrivalLaw::pareto_tail(0.3, 1.0), 0.5, 1.5);
  EXPECT_EQ(r.value, 0.0);
}

TEST(Negligibility, RatioShrinksWithDelta) {
  const auto law = InterarrivalLaw::pareto_tail(0.3, 1.0);
  const double t = 1e6;
  double prev = std::numeric_limits<double>::infinity();
  for (double delta : {1e-1, 1e-2, 1e-3}) {
    const double r = negligibility_integral(law, delta, t).ratio;
    EXPECT_LT(r, prev) << delta;
    prev = r;
  }
}

TEST(Negligibility, AgreesWithRiemannSum) {
  const auto law = InterarrivalLaw::pareto_tail(0.3, 1.0);
  const double t = 1e6, delta = 1e-2, h = 1e-2;
  const std::size_t n = static_cast<std::size_t>((delta * t - 1.0) / h);
  long double sum = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 + h * (static_cast<double>(i) + 0.5);
    const double s = law.tail(z);
    sum += law.density(t - z) / (z * s * s);
  }
  EXPECT_NEAR(negligibility_integral(law, delta, t).value / static_cast<double>(sum * h), 1.0, 1e-3);
}

TEST(RenewalFunction, ExponentialIsLinear) {
  const RenewalFunction rf(InterarrivalLaw::exponential(1.0), RenewalGridOptions{0.05, 50.0, 1.02, 200.0, 1e-3});
  for (double x : {0.5, 3.0, 40.0, 150.0}) {
    EXPECT_NEAR(rf.U(x), 1.0 + x, 2e-2 * (1.0 + x)) << x;
    EXPECT_NEAR(rf.mass_check(x), 1.0, 1e-2) << x;
  }
}

TEST(AgeOvershoot, TabulatedSamplerMatchesSimulation) {
  const auto law = InterarrivalLaw::pareto_tail(0.7, 1.0);
  RenewalGridOptions opt;
  opt.max_time = 600.0;
  const RenewalFunction rf(law, opt);
  const AgeOvershootSampler s(rf, 500.0);
  Rng rng(8);
  std::vector<double> tab, sim;
  for (int i = 0; i < 5000; ++i) {
    tab.push_back(s.sample(rng).age);
    sim.push_back(sample_age_overshoot_exact(law, 500.0, rng).age);
  }
  EXPECT_GT(ks_two_sample(tab, sim).p_value, 0.01);
  EXPECT_NEAR(s.mass_defect(), 0.0, 1e-2);
}

TEST(AgeOvershoot, ResidualOfExponentialIsMemoryless) {
  Rng rng(9);
  std::vector<double> res, fresh;
  const auto law = InterarrivalLaw::exponential(1.5);
  for (int i = 0; i < 5000; ++i) {
    res.push_back(sample_residual(law, 3.0, rng));
    fresh.push_back(law.sample(rng));
  }
  EXPECT_GT(ks_two_sample(res, fresh).p_value, 0.01);
}

TEST(Stats, WilsonInterval) {
  const auto ci = wilson_interval(0, 100);
  EXPECT_EQ(ci.lo, 0.0);
  EXPECT_GT(ci.hi, 0.0);
  const auto mid = wilson_interval(50, 100);
  EXPECT_NEAR(mid.lo + mid.hi, 1.0, 1e-12);
  EXPECT_LT(wilson_interval(500, 1000).half_width(), mid.half_width());
}
