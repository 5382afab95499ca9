#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rcp/graphical/box.hpp"
#include "rcp/renewal/law.hpp"
#include "rcp/renewal/track.hpp"

namespace rcp {

enum class EventKind : std::uint8_t { cure = 0, trans = 1 };

struct Event {
  double time = 0.0;
  std::uint32_t site = 0;    // cured site, or transmission source
  std::uint32_t target = 0;  // transmission target (equals site for cures)
  EventKind kind = EventKind::cure;
  std::int8_t dir = -1;      // transmission direction, -1 for cures

  bool operator==(const Event&) const = default;
};

struct BuildOptions {
  // Transmission marks are drawn at lambda_ref and thinned to lambda, so samples
  // sharing a seed and lambda_ref are coupled monotonically in lambda. 0 means lambda.
  double lambda_ref = 0.0;
  // Per-site renewal start offsets (<= 0) relative to the window start; empty means all 0.
  std::vector<double> start_offsets;
  double mark_budget = 5e7;
  // Separate master seed for transmission streams; empty means the sample seed.
  std::optional<std::uint64_t> trans_seed;
  int workers = 0;  // OpenMP threads, 0 = runtime default
};

// Percolation structure on a space-time box. Immutable once built.
class GraphicalSample {
 public:
  // Assembles a sample from explicit marks; validates ordering, window and edges.
  // trans is indexed by edge_slot and must have num_sites * 2d entries (or be empty).
  static GraphicalSample from_marks(SpaceTimeBox box, double lambda, InterarrivalLaw law,
                                    std::vector<RenewalTrack> cures,
                                    std::vector<std::vector<double>> trans,
                                    std::uint64_t seed = 0, double lambda_ref = 0.0);

  const SpaceTimeBox& box() const { return box_; }
  int dim() const { return box_.dim(); }
  double lambda() const { return lambda_; }
  double lambda_ref() const { return lambda_ref_; }
  const InterarrivalLaw& law() const { return law_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t num_sites() const { return cures_.size(); }

  const RenewalTrack& cure(std::size_t site) const { return cures_[site]; }
  const std::vector<RenewalTrack>& cures() const { return cures_; }
  const std::vector<double>& trans(std::size_t site, int dir) const {
    return trans_[edge_slot(site, dir, dim())];
  }
  const std::vector<std::vector<double>>& trans_lists() const { return trans_; }
  // Neighbor index in direction dir, or -1 outside the box.
  long neighbor(std::size_t site, int dir) const { return neighbors_[edge_slot(site, dir, dim())]; }
  long norm(std::size_t site) const { return norms_[site]; }
  bool on_boundary(std::size_t site) const { return boundary_[site] != 0; }

  // All marks inside the window, sorted by (time, kind, site, dir).
  const std::vector<Event>& events() const { return events_; }
  std::size_t mark_count() const { return events_.size(); }

  bool operator==(const GraphicalSample& o) const;

 private:
  friend GraphicalSample build_sample_impl(const SpaceTimeBox&, double, const InterarrivalLaw&,
                                           std::uint64_t, const BuildOptions&, bool);
  GraphicalSample(SpaceTimeBox box, double lambda, InterarrivalLaw law);
  void finalize();

  SpaceTimeBox box_;
  double lambda_ = 0.0;
  double lambda_ref_ = 0.0;
  InterarrivalLaw law_;
  std::uint64_t seed_ = 0;
  std::vector<RenewalTrack> cures_;
  std::vector<std::vector<double>> trans_;
  std::vector<long> neighbors_;
  std::vector<long> norms_;
  std::vector<std::uint8_t> boundary_;
  std::vector<Event> events_;
};

// Stream seeds hash global coordinates, so enlarging the box keeps existing streams.
GraphicalSample build_sample(const SpaceTimeBox& box, double lambda, const InterarrivalLaw& law,
                             std::uint64_t seed, const BuildOptions& opt = {});
// Single-threaded reference; bit-identical to build_sample.
GraphicalSample build_sample_serial(const SpaceTimeBox& box, double lambda,
                                    const InterarrivalLaw& law, std::uint64_t seed,
                                    const BuildOptions& opt = {});

// Transmission lists indexed by edge slot, drawn from the same streams as build_sample.
std::vector<std::vector<double>> generate_transmissions(const SpaceTimeBox& box, double lambda,
                                                        double lambda_ref, std::uint64_t seed);

// Expected number of marks, used for the capacity check.
double expected_mark_count(const SpaceTimeBox& box, double lambda_ref, const InterarrivalLaw& law);

// Events with time in (t1, t2].
std::span<const Event> events_between(const GraphicalSample& sample, double t1, double t2);

std::uint64_t site_stream_index(const Point& x);
std::uint64_t edge_stream_index(const Point& x, int dir);

}  // namespace rcp
