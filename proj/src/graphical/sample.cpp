#include "rcp/graphical/sample.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include <omp.h>

#include "rcp/errors.hpp"
#include "rcp/renewal/diagnostics.hpp"
#include "rcp/rng.hpp"

namespace rcp {

namespace {

bool event_less(const Event& a, const Event& b) {
  return std::tie(a.time, a.kind, a.site, a.dir) < std::tie(b.time, b.kind, b.site, b.dir);
}

RenewalTrack window_cure_track(const InterarrivalLaw& law, const SpaceTimeBox& box, double offset,
                               Rng& rng) {
  RenewalTrack tr = generate_track(law, box.s + offset, box.t, rng);
  if (offset < 0.0) {
    const auto first = std::upper_bound(tr.marks.begin(), tr.marks.end(), box.s);
    tr.marks.erase(tr.marks.begin(), first);
  }
  return tr;
}

std::vector<double> window_poisson(double lambda, double lambda_ref, double s, double t, Rng& rng) {
  std::vector<double> out;
  if (!(lambda > 0.0)) return out;
  double x = s;
  while (true) {
    x += rng.exponential(lambda_ref);
    if (x > t) break;
    const double label = rng.u01();
    if (label * lambda_ref <= lambda && x > s) out.push_back(x);
  }
  return out;
}

// Re-draws transmission marks that coincide with any other mark. Cure ties are kept.
void resolve_collisions(std::vector<std::vector<double>>& trans, const std::vector<RenewalTrack>& cures,
                        const SpaceTimeBox& box, std::uint64_t seed) {
  struct Tag {
    double time;
    int kind;  // 0 cure, 1 trans
    std::size_t stream;
  };
  for (std::uint64_t round = 0;; ++round) {
    std::vector<Tag> all;
    for (std::size_t i = 0; i < cures.size(); ++i) {
      for (double m : cures[i].marks) all.push_back({m, 0, i});
    }
    for (std::size_t e = 0; e < trans.size(); ++e) {
      for (double m : trans[e]) all.push_back({m, 1, e});
    }
    std::sort(all.begin(), all.end(), [](const Tag& a, const Tag& b) {
      return std::tie(a.time, a.kind, a.stream) < std::tie(b.time, b.kind, b.stream);
    });
    bool changed = false;
    for (std::size_t k = 1; k < all.size(); ++k) {
      if (all[k].time != all[k - 1].time || all[k].kind == 0) continue;
      auto& list = trans[all[k].stream];
      Rng rng(derive_seed(seed, StreamKind::collision, hash_combine(all[k].stream, round)));
      auto it = std::find(list.begin(), list.end(), all[k].time);
      if (it == list.end()) continue;
      double fresh;
      do {
        fresh = rng.uniform(box.s, box.t);
      } while (!(fresh > box.s && fresh <= box.t));
      *it = fresh;
      std::sort(list.begin(), list.end());
      changed = true;
    }
    if (!changed) return;
  }
}

}  // namespace

std::uint64_t site_stream_index(const Point& x) {
  std::uint64_t h = 0x52435053ULL;  // "RCPS"
  for (long v : x) h = hash_combine(h, static_cast<std::uint64_t>(v));
  return h;
}

std::uint64_t edge_stream_index(const Point& x, int dir) {
  return hash_combine(site_stream_index(x), static_cast<std::uint64_t>(dir) + 1);
}

GraphicalSample::GraphicalSample(SpaceTimeBox box, double lambda, InterarrivalLaw law)
    : box_(std::move(box)), lambda_(lambda), lambda_ref_(lambda), law_(std::move(law)) {}

void GraphicalSample::finalize() {
  const int d = dim();
  const std::size_t n = box_.num_sites();
  neighbors_.assign(n * 2 * d, -1);
  norms_.assign(n, 0);
  boundary_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    Point x = box_.coords(i);
    norms_[i] = linf_norm(x);
    for (int j = 0; j < d; ++j) {
      if (x[j] == box_.lo[j] || x[j] == box_.hi[j]) boundary_[i] = 1;
    }
    for (int dir = 0; dir < 2 * d; ++dir) {
      Point y = x;
      y[dir_axis(dir)] += dir_sign(dir);
      if (box_.contains(y)) neighbors_[edge_slot(i, dir, d)] = static_cast<long>(box_.index(y));
    }
  }
  events_.clear();
  for (std::size_t i = 0; i < n; ++i) {
    for (double m : cures_[i].marks) {
      if (m > box_.s && m <= box_.t) {
        events_.push_back({m, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i),
                           EventKind::cure, -1});
      }
    }
    for (int dir = 0; dir < 2 * d; ++dir) {
      const long nb = neighbors_[edge_slot(i, dir, d)];
      for (double m : trans_[edge_slot(i, dir, d)]) {
        events_.push_back({m, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(nb),
                           EventKind::trans, static_cast<std::int8_t>(dir)});
      }
    }
  }
  std::sort(events_.begin(), events_.end(), event_less);
}

GraphicalSample GraphicalSample::from_marks(SpaceTimeBox box, double lambda, InterarrivalLaw law,
                                            std::vector<RenewalTrack> cures,
                                            std::vector<std::vector<double>> trans,
                                            std::uint64_t seed, double lambda_ref) {
  box.validate();
  if (lambda < 0.0) throw DomainError("GraphicalSample: lambda must be >= 0");
  GraphicalSample g(box, lambda, std::move(law));
  g.seed_ = seed;
  g.lambda_ref_ = lambda_ref > 0.0 ? lambda_ref : lambda;
  const std::size_t n = box.num_sites();
  const int d = box.dim();
  if (cures.size() != n) throw DomainError("GraphicalSample: need one cure track per site");
  if (trans.empty()) trans.resize(n * 2 * d);
  if (trans.size() != n * 2 * static_cast<std::size_t>(d)) {
    throw DomainError("GraphicalSample: need one transmission list per edge slot");
  }
  auto check_list = [&](const std::vector<double>& v, const char* what) {
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (!(v[k] > box.s && v[k] <= box.t)) {
        throw DomainError(std::string("GraphicalSample: ") + what + " mark outside the window");
      }
      if (k > 0 && !(v[k] > v[k - 1])) {
        throw DomainError(std::string("GraphicalSample: ") + what + " marks not strictly increasing");
      }
    }
  };
  for (auto& c : cures) {
    c.horizon = box.t;
    check_list(c.marks, "cure");
  }
  g.cures_ = std::move(cures);
  g.trans_ = std::move(trans);
  g.finalize();
  for (std::size_t slot = 0; slot < g.trans_.size(); ++slot) {
    check_list(g.trans_[slot], "transmission");
    if (!g.trans_[slot].empty() && g.neighbors_[slot] < 0) {
      throw DomainError("GraphicalSample: transmission marks on an edge leaving the box");
    }
  }
  return g;
}

bool GraphicalSample::operator==(const GraphicalSample& o) const {
  return box_ == o.box_ && lambda_ == o.lambda_ && lambda_ref_ == o.lambda_ref_ &&
         seed_ == o.seed_ && cures_ == o.cures_ && trans_ == o.trans_;
}

double expected_mark_count(const SpaceTimeBox& box, double lambda_ref, const InterarrivalLaw& law) {
  const double T = box.t - box.s;
  const double sites = static_cast<double>(box.num_sites());
  double edges = 0.0;
  for (int j = 0; j < box.dim(); ++j) {
    edges += 2.0 * sites * static_cast<double>(box.width(j) - 1) / static_cast<double>(box.width(j));
  }
  const double m = integrated_tail_m(law, T, 1e-6);
  const double cures_per_site = m > 0.0 ? 2.0 * T / m + 1.0 : 1.0;
  return edges * lambda_ref * T + sites * cures_per_site;
}

GraphicalSample build_sample_impl(const SpaceTimeBox& box, double lambda, const InterarrivalLaw& law,
                                  std::uint64_t seed, const BuildOptions& opt, bool parallel) {
  box.validate();
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("build_sample: lambda must be >= 0");
  const double lref = opt.lambda_ref > 0.0 ? opt.lambda_ref : lambda;
  if (lref < lambda) throw DomainError("build_sample: lambda_ref must be >= lambda");
  const std::size_t n = box.num_sites();
  if (!opt.start_offsets.empty() && opt.start_offsets.size() != n) {
    throw DomainError("build_sample: need one start offset per site");
  }
  for (double o : opt.start_offsets) {
    if (!(o <= 0.0)) throw DomainError("build_sample: start offsets must be <= 0");
  }
  const double expected = expected_mark_count(box, lref, law);
  if (expected > opt.mark_budget) {
    throw CapacityError("build_sample: about " + std::to_string(expected) +
                        " marks expected, budget is " + std::to_string(opt.mark_budget));
  }

  const int d = box.dim();
  GraphicalSample g(box, lambda, law);
  g.seed_ = seed;
  g.lambda_ref_ = lref;
  g.cures_.resize(n);
  g.trans_.assign(n * 2 * d, {});
  const long total = static_cast<long>(n);
  const std::uint64_t tseed = opt.trans_seed.value_or(seed);
  const int threads = parallel ? (opt.workers > 0 ? opt.workers : omp_get_max_threads()) : 1;

#pragma omp parallel for schedule(dynamic, 64) num_threads(threads)
  for (long i = 0; i < total; ++i) {
    const auto site = static_cast<std::size_t>(i);
    const Point x = box.coords(site);
    const double offset = opt.start_offsets.empty() ? 0.0 : opt.start_offsets[site];
    Rng cure_rng(derive_seed(seed, StreamKind::cure, site_stream_index(x)));
    g.cures_[site] = window_cure_track(law, box, offset, cure_rng);
    for (int dir = 0; dir < 2 * d; ++dir) {
      Point y = x;
      y[dir_axis(dir)] += dir_sign(dir);
      if (!box.contains(y)) continue;
      Rng trans_rng(derive_seed(tseed, StreamKind::trans, edge_stream_index(x, dir)));
      g.trans_[edge_slot(site, dir, d)] = window_poisson(lambda, lref, box.s, box.t, trans_rng);
    }
  }
  resolve_collisions(g.trans_, g.cures_, box, seed);
  g.finalize();
  return g;
}

GraphicalSample build_sample(const SpaceTimeBox& box, double lambda, const InterarrivalLaw& law,
                             std::uint64_t seed, const BuildOptions& opt) {
  return build_sample_impl(box, lambda, law, seed, opt, true);
}

GraphicalSample build_sample_serial(const SpaceTimeBox& box, double lambda,
                                    const InterarrivalLaw& law, std::uint64_t seed,
                                    const BuildOptions& opt) {
  return build_sample_impl(box, lambda, law, seed, opt, false);
}

std::vector<std::vector<double>> generate_transmissions(const SpaceTimeBox& box, double lambda,
                                                        double lambda_ref, std::uint64_t seed) {
  box.validate();
  const double lref = lambda_ref > 0.0 ? lambda_ref : lambda;
  if (lref < lambda) throw DomainError("generate_transmissions: lambda_ref must be >= lambda");
  const int d = box.dim();
  const std::size_t n = box.num_sites();
  std::vector<std::vector<double>> trans(n * 2 * d);
  for (std::size_t site = 0; site < n; ++site) {
    const Point x = box.coords(site);
    for (int dir = 0; dir < 2 * d; ++dir) {
      Point y = x;
      y[dir_axis(dir)] += dir_sign(dir);
      if (!box.contains(y)) continue;
      Rng rng(derive_seed(seed, StreamKind::trans, edge_stream_index(x, dir)));
      trans[edge_slot(site, dir, d)] = window_poisson(lambda, lref, box.s, box.t, rng);
    }
  }
  return trans;
}

std::span<const Event> events_between(const GraphicalSample& sample, double t1, double t2) {
  if (t1 > t2) throw DomainError("events_between: t1 > t2");
  const auto& box = sample.box();
  if (t1 < box.s || t2 > box.t) throw DomainError("events_between: range outside the window");
  const auto& ev = sample.events();
  auto by_time = [](const Event& e, double t) { return e.time <= t; };
  const auto lo = std::partition_point(ev.begin(), ev.end(), [&](const Event& e) { return by_time(e, t1); });
  const auto hi = std::partition_point(lo, ev.end(), [&](const Event& e) { return by_time(e, t2); });
  return {lo, hi};
}

}  // namespace rcp
