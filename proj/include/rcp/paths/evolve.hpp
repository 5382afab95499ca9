#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rcp/graphical/sample.hpp"

namespace rcp {

// Infected set over the sites of a box, indexed like SpaceTimeBox::index.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::size_t sites) : bits_(sites, 0) {}
  static Configuration from_sites(std::size_t sites, const std::vector<std::size_t>& infected);
  static Configuration full(std::size_t sites);

  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool v);
  std::size_t count() const { return count_; }
  bool empty() const { return count_ == 0; }
  std::size_t size() const { return bits_.size(); }
  std::vector<std::size_t> sites() const;
  // True iff every infected site here is infected in other.
  bool subset_of(const Configuration& other) const;

  bool operator==(const Configuration& o) const { return bits_ == o.bits_; }

 private:
  std::vector<std::uint8_t> bits_;
  std::size_t count_ = 0;
};

enum class Effect : std::uint8_t { noop = 0, infected = 1, cured = 2 };

struct HistoryEntry {
  double time = 0.0;
  EventKind kind = EventKind::cure;
  std::uint32_t site = 0;
  std::uint32_t target = 0;
  Effect effect = Effect::noop;
  std::size_t infected_count = 0;

  bool operator==(const HistoryEntry&) const = default;
};

// Record of an evolution; the state at an event time is the post-event state.
struct InfectionHistory {
  SpaceTimeBox box;
  double start = 0.0;
  double stop = 0.0;
  Configuration initial;
  std::vector<HistoryEntry> entries;
  long max_norm = -1;        // largest sup-norm ever infected, -1 if never
  bool boundary_hit = false; // some boundary site of the box was ever infected
  std::optional<double> extinction_time;

  Configuration at(double t) const;
};

struct EvolveOptions {
  bool record_noops = false;
};

// Event sweep from xi0 at the window start up to stop_time. Infection never
// leaves the box. Stops recording once the configuration is empty.
InfectionHistory evolve(const GraphicalSample& sample, const Configuration& xi0, double stop_time,
                        const EvolveOptions& opt = {});

// Extinction time, or empty when alive at the history's stop time.
std::optional<double> survival_time(const InfectionHistory& history);

// Site masks restricting a run. Null pointers mean "whole box" / "none".
struct RegionRun {
  const std::vector<std::uint8_t>* region = nullptr;   // marks outside are ignored
  const std::vector<std::uint8_t>* clamped = nullptr;  // infected throughout, never cured
  const std::vector<std::uint8_t>* target = nullptr;   // stop at the first infected target site
};

struct RegionResult {
  Configuration state;
  double time = 0.0;        // time the run ended
  bool target_hit = false;
  bool boundary_hit = false;
  bool extinct = false;
};

// Lean evolution over events in (t0, t1] without recording a history.
RegionResult evolve_region(const GraphicalSample& sample, Configuration init, double t0, double t1,
                           const RegionRun& run = {});

// CSV rows: time,event_kind,site,target,effect,infected_count.
std::string history_csv(const InfectionHistory& history);

// Coordinates joined with ';'.
std::string format_point(const Point& x);

}  // namespace rcp
