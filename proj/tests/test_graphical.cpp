#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "rcp/errors.hpp"
#include "rcp/graphical/box.hpp"
#include "rcp/graphical/dump.hpp"
#include "rcp/graphical/sample.hpp"

using namespace rcp;

TEST(Box, IndexRoundTrip) {
  const auto b = SpaceTimeBox::cube(2, 3, 0.0, 1.0);
  EXPECT_EQ(b.num_sites(), 49u);
  for (std::size_t i = 0; i < b.num_sites(); ++i) EXPECT_EQ(b.index(b.coords(i)), i);
  EXPECT_THROW((SpaceTimeBox{{0}, {-1}, 0.0, 1.0}.validate()), DomainError);
  EXPECT_THROW((SpaceTimeBox{{0}, {1}, 2.0, 1.0}.validate()), DomainError);
}

TEST(Sample, ZeroRateHasNoTransmissions) {
  const auto g = build_sample(SpaceTimeBox::cube(2, 2, 0.0, 10.0), 0.0, InterarrivalLaw::exponential(1.0), 1);
  for (const auto& l : g.trans_lists()) EXPECT_TRUE(l.empty());
}

TEST(Sample, DeterministicCures) {
  const auto g = build_sample(SpaceTimeBox::cube(1, 2, 0.0, 3.5), 1.0, InterarrivalLaw::deterministic(1.0), 1);
  for (std::size_t i = 0; i < g.num_sites(); ++i) {
    EXPECT_EQ(g.cure(i).marks, (std::vector<double>{1.0, 2.0, 3.0}));
  }
}

TEST(Sample, SingleEdgePoissonMean) {
  const SpaceTimeBox box{{0}, {1}, 0.0, 5.0};
  double total = 0.0;
  const int seeds = 1000;
  for (int s = 0; s < seeds; ++s) {
    const auto g = build_sample(box, 2.0, InterarrivalLaw::deterministic(100.0), static_cast<std::uint64_t>(s));
    total += static_cast<double>(g.trans(0, 0).size());
  }
  EXPECT_NEAR(total / seeds, 10.0, 3.0 * std::sqrt(10.0 / seeds));
}

TEST(Sample, ParallelBuildMatchesSerial) {
  const auto box = SpaceTimeBox::cube(2, 6, 0.0, 20.0);
  const auto law = InterarrivalLaw::pareto_tail(0.7, 1.0);
  for (int w : {1, 2, 4}) {
    BuildOptions opt;
    opt.workers = w;
    EXPECT_TRUE(build_sample(box, 0.8, law, 11, opt) == build_sample_serial(box, 0.8, law, 11));
  }
}

TEST(Sample, ThinningNestsTransmissions) {
  const auto box = SpaceTimeBox::cube(1, 10, 0.0, 30.0);
  const auto law = InterarrivalLaw::exponential(1.0);
  BuildOptions opt;
  opt.lambda_ref = 4.0;
  const auto lo = build_sample(box, 0.5, law, 3, opt), hi = build_sample(box, 2.0, law, 3, opt);
  for (std::size_t i = 0; i < lo.trans_lists().size(); ++i) {
    const auto& a = lo.trans_lists()[i];
    const auto& b = hi.trans_lists()[i];
    EXPECT_TRUE(std::includes(b.begin(), b.end(), a.begin(), a.end()));
  }
  for (std::size_t i = 0; i < lo.num_sites(); ++i) EXPECT_EQ(lo.cure(i), hi.cure(i));
}

TEST(Sample, EnlargingTheBoxKeepsStreams) {
  const auto law = InterarrivalLaw::exponential(1.0);
  const auto small = build_sample(SpaceTimeBox::cube(1, 3, 0.0, 10.0), 1.0, law, 9);
  const auto big = build_sample(SpaceTimeBox::cube(1, 8, 0.0, 10.0), 1.0, law, 9);
  for (long x = -3; x <= 3; ++x) {
    EXPECT_EQ(small.cure(small.box().index({x})), big.cure(big.box().index({x})));
    if (x < 3) {
      EXPECT_EQ(small.trans(small.box().index({x}), 0), big.trans(big.box().index({x}), 0));
    }
  }
}

TEST(Sample, MarkBudgetEnforced) {
  BuildOptions opt;
  opt.mark_budget = 100.0;
  EXPECT_THROW(build_sample(SpaceTimeBox::cube(1, 50, 0.0, 50.0), 1.0, InterarrivalLaw::exponential(1.0), 1, opt),
               CapacityError);
}

TEST(Events, EmptySample) {
  const SpaceTimeBox box{{0}, {0}, 0.0, 1.0};
  const auto g = GraphicalSample::from_marks(box, 1.0, InterarrivalLaw::exponential(1.0),
                                             {RenewalTrack{0.0, {}, 1.0}}, {});
  EXPECT_TRUE(g.events().empty());
}

TEST(Events, CureThenTransmission) {
  const SpaceTimeBox box{{0}, {1}, 0.0, 3.0};
  std::vector<std::vector<double>> trans(4);
  trans[edge_slot(0, 0, 1)] = {2.0};
  const auto g = GraphicalSample::from_marks(box, 1.0, InterarrivalLaw::exponential(1.0),
                                             {RenewalTrack{0.0, {1.0}, 3.0}, RenewalTrack{0.0, {}, 3.0}}, trans);
  ASSERT_EQ(g.events().size(), 2u);
  EXPECT_EQ(g.events()[0].kind, EventKind::cure);
  EXPECT_EQ(g.events()[1].kind, EventKind::trans);
  EXPECT_EQ(g.events()[1].target, 1u);
  EXPECT_EQ(events_between(g, 1.0, 3.0).size(), 1u);
}

TEST(Events, StreamIsSortedPermutationOfMarks) {
  const auto g = build_sample(SpaceTimeBox::cube(2, 3, 0.0, 15.0), 1.3, InterarrivalLaw::pareto_tail(0.6, 0.5), 21);
  std::vector<double> stored;
  for (const auto& c : g.cures()) stored.insert(stored.end(), c.marks.begin(), c.marks.end());
  for (const auto& l : g.trans_lists()) stored.insert(stored.end(), l.begin(), l.end());
  std::sort(stored.begin(), stored.end());
  std::vector<double> streamed;
  for (const auto& e : g.events()) streamed.push_back(e.time);
  EXPECT_TRUE(std::is_sorted(streamed.begin(), streamed.end()));
  EXPECT_EQ(streamed, stored);
}

TEST(FromMarks, RejectsUnsortedOrOutsideWindow) {
  const SpaceTimeBox box{{0}, {0}, 0.0, 1.0};
  const auto law = InterarrivalLaw::exponential(1.0);
  EXPECT_THROW(GraphicalSample::from_marks(box, 1.0, law, {RenewalTrack{0.0, {0.5, 0.2}, 1.0}}, {}), DomainError);
  EXPECT_THROW(GraphicalSample::from_marks(box, 1.0, law, {RenewalTrack{0.0, {1.5}, 1.0}}, {}), DomainError);
}

TEST(Dump, RoundTrip) {
  const auto g = build_sample(SpaceTimeBox::cube(2, 2, 0.0, 8.0), 0.9, InterarrivalLaw::example_log_sv(20.0), 5);
  const auto bytes = serialize_sample(g);
  EXPECT_TRUE(deserialize_sample(bytes) == g);
  EXPECT_EQ(sample_digest(deserialize_sample(bytes)), sample_digest(g));
}

TEST(Dump, CorruptionIsDetected) {
  const auto g = build_sample(SpaceTimeBox::cube(1, 2, 0.0, 8.0), 0.9, InterarrivalLaw::exponential(1.0), 5);
  auto bytes = serialize_sample(g);
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(deserialize_sample(bad_magic), FormatError);
  auto bad_version = bytes;
  bad_version[4] = 99;
  EXPECT_THROW(deserialize_sample(bad_version), FormatError);
  auto truncated = bytes;
  truncated.resize(bytes.size() - 3);
  EXPECT_THROW(deserialize_sample(truncated), FormatError);
  EXPECT_THROW(deserialize_sample({}), FormatError);
}
