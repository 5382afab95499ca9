#include "rcp/paths/evolve.hpp"

#include <algorithm>
#include <cstdio>

#include "rcp/errors.hpp"

namespace rcp {

Configuration Configuration::from_sites(std::size_t sites, const std::vector<std::size_t>& infected) {
  Configuration c(sites);
  for (std::size_t i : infected) {
    if (i >= sites) throw DomainError("Configuration: site index outside the box");
    c.set(i, true);
  }
  return c;
}

Configuration Configuration::full(std::size_t sites) {
  Configuration c(sites);
  for (std::size_t i = 0; i < sites; ++i) c.set(i, true);
  return c;
}

void Configuration::set(std::size_t i, bool v) {
  const bool old = bits_[i] != 0;
  if (old == v) return;
  bits_[i] = v ? 1 : 0;
  if (v) ++count_; else --count_;
}

std::vector<std::size_t> Configuration::sites() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) out.push_back(i);
  }
  return out;
}

bool Configuration::subset_of(const Configuration& other) const {
  if (other.size() != size()) return false;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] && !other.bits_[i]) return false;
  }
  return true;
}

Configuration InfectionHistory::at(double t) const {
  Configuration c = initial;
  for (const auto& e : entries) {
    if (e.time > t) break;
    if (e.effect == Effect::infected) c.set(e.target, true);
    if (e.effect == Effect::cured) c.set(e.site, false);
  }
  return c;
}

InfectionHistory evolve(const GraphicalSample& sample, const Configuration& xi0, double stop_time,
                        const EvolveOptions& opt) {
  const auto& box = sample.box();
  if (xi0.size() != sample.num_sites()) throw DomainError("evolve: configuration size differs from the box");
  if (stop_time < box.s || stop_time > box.t) throw DomainError("evolve: stop_time outside the window");
  InfectionHistory h;
  h.box = box;
  h.start = box.s;
  h.stop = stop_time;
  h.initial = xi0;
  Configuration xi = xi0;
  for (std::size_t i : xi.sites()) {
    h.max_norm = std::max(h.max_norm, sample.norm(i));
    if (sample.on_boundary(i)) h.boundary_hit = true;
  }
  if (xi.empty()) {
    h.extinction_time = box.s;
    return h;
  }
  for (const Event& e : events_between(sample, box.s, stop_time)) {
    Effect eff = Effect::noop;
    if (e.kind == EventKind::cure) {
      if (xi[e.site]) {
        xi.set(e.site, false);
        eff = Effect::cured;
      }
    } else if (xi[e.site] && !xi[e.target]) {
      xi.set(e.target, true);
      eff = Effect::infected;
      h.max_norm = std::max(h.max_norm, sample.norm(e.target));
      if (sample.on_boundary(e.target)) h.boundary_hit = true;
    }
    if (eff != Effect::noop || opt.record_noops) {
      h.entries.push_back({e.time, e.kind, e.site, e.target, eff, xi.count()});
    }
    if (xi.empty()) {
      h.extinction_time = e.time;
      break;
    }
  }
  return h;
}

std::optional<double> survival_time(const InfectionHistory& history) { return history.extinction_time; }

RegionResult evolve_region(const GraphicalSample& sample, Configuration init, double t0, double t1,
                           const RegionRun& run) {
  const std::size_t n = sample.num_sites();
  if (init.size() != n) throw DomainError("evolve_region: configuration size differs from the box");
  auto in = [&](std::uint32_t i) { return run.region == nullptr || (*run.region)[i] != 0; };
  auto clamped = [&](std::uint32_t i) { return run.clamped != nullptr && (*run.clamped)[i] != 0; };
  auto target = [&](std::uint32_t i) { return run.target != nullptr && (*run.target)[i] != 0; };

  RegionResult r;
  r.state = std::move(init);
  if (run.clamped != nullptr) {
    for (std::size_t i = 0; i < n; ++i) {
      if ((*run.clamped)[i]) r.state.set(i, true);
    }
  }
  r.time = t0;
  bool has_clamp = false;
  for (std::size_t i : r.state.sites()) {
    if (sample.on_boundary(i)) r.boundary_hit = true;
    if (target(static_cast<std::uint32_t>(i))) r.target_hit = true;
    if (clamped(static_cast<std::uint32_t>(i))) has_clamp = true;
  }
  if (r.target_hit) return r;
  if (r.state.empty()) {
    r.extinct = true;
    return r;
  }
  for (const Event& e : events_between(sample, t0, t1)) {
    if (e.kind == EventKind::cure) {
      if (!in(e.site) || clamped(e.site) || !r.state[e.site]) continue;
      r.state.set(e.site, false);
      if (r.state.empty() && !has_clamp) {
        r.extinct = true;
        r.time = e.time;
        return r;
      }
    } else {
      if (!in(e.site) || !in(e.target) || !r.state[e.site] || r.state[e.target]) continue;
      r.state.set(e.target, true);
      if (sample.on_boundary(e.target)) r.boundary_hit = true;
      if (target(e.target)) {
        r.target_hit = true;
        r.time = e.time;
        return r;
      }
    }
  }
  r.time = t1;
  return r;
}

std::string format_point(const Point& x) {
  std::string s;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(x[i]);
  }
  return s;
}

std::string history_csv(const InfectionHistory& h) {
  std::string out = "time,event_kind,site,target,effect,infected_count\n";
  char buf[64];
  for (const auto& e : h.entries) {
    std::snprintf(buf, sizeof buf, "%.17g", e.time);
    out += buf;
    out += e.kind == EventKind::cure ? ",cure," : ",trans,";
    out += format_point(h.box.coords(e.site));
    out += ',';
    out += e.kind == EventKind::trans ? format_point(h.box.coords(e.target)) : "";
    out += e.effect == Effect::infected ? ",infected," : e.effect == Effect::cured ? ",cured," : ",noop,";
    out += std::to_string(e.infected_count);
    out += '\n';
  }
  return out;
}

}  // namespace rcp
