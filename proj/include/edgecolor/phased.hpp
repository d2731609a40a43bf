#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "edgecolor/coloring.hpp"
#include "edgecolor/fractional.hpp"
#include "edgecolor/graph.hpp"
#include "edgecolor/rng.hpp"
#include "edgecolor/rounding.hpp"

namespace edgecolor {

/// Constants of the phased algorithms. The defaults are desk-scale values;
/// asymptotic_phase_config() reproduces the asymptotic choices.
struct PhaseConfig {
  // Unknown-delta algorithm.
  double p = 0.15;
  /// Defaults to ceil((4/p) ln(1/p)).
  std::optional<std::uint32_t> num_phases;
  double epsilon = 1.0;
  std::uint32_t delta_prime = 1;
  FractionalAlgo frac = FractionalAlgo::bounded;
  double beta = std::numbers::e / (std::numbers::e - 1.0);

  // Known-delta algorithm.
  /// Colors per phase; defaults to floor(sqrt(delta ln n)).
  std::optional<std::uint32_t> ell;
  /// d_i = delta - i (ell - slack sqrt(ell ln n)).
  double slack = 2.0;
  /// Defaults to floor(delta / ell).
  std::optional<std::uint32_t> max_phases;
};

inline double log_vertices(std::size_t n) { return std::log(static_cast<double>(std::max<std::size_t>(n, 2))); }

inline std::uint32_t default_num_phases(double p) {
  return static_cast<std::uint32_t>(std::ceil(4.0 / p * std::log(1.0 / p)));
}

/// p = (24 ln n / delta')^(1/12), P = ceil((4/p) ln(1/p)), eps = p^4 / (12 ln n),
/// slack 8. Throws if p is not below 1, which happens unless delta' is huge.
inline PhaseConfig asymptotic_phase_config(std::size_t n, std::uint32_t delta_prime) {
  PhaseConfig cfg;
  const double ln_n = log_vertices(n);
  cfg.delta_prime = std::max<std::uint32_t>(delta_prime, 1);
  cfg.p = std::pow(24.0 * ln_n / cfg.delta_prime, 1.0 / 12.0);
  if (!(cfg.p < 1.0))
    throw std::invalid_argument("asymptotic constants need delta' > 24 ln n (got p = " + std::to_string(cfg.p) + ")");
  cfg.num_phases = default_num_phases(cfg.p);
  cfg.epsilon = std::pow(cfg.p, 4) / (12.0 * ln_n);
  cfg.slack = 8.0;
  return cfg;
}

namespace detail {

inline void finish_with_greedy(IntegralColoring& coloring, UsedColors& greedy, EdgeId first, EdgeId count,
                               std::uint64_t& leftover) {
  for (EdgeId e = first; e < first + count; ++e)
    while (coloring.uncolored_copies(e) > 0) {
      ++leftover;
      greedy_color_edge(coloring, greedy, e);
    }
}

struct SeededRounder {
  SeededRounder(std::size_t n, std::uint64_t seed) : rounder(n), rng(seed) {}
  ProposalRounder rounder;
  Rng rng;
  std::uint32_t color = 0;
};

}  // namespace detail

/// Randomized coloring for unknown delta. Each phase i runs its own copy of
/// the fractional algorithm on the still-uncolored subgraph U_i, stretched to
/// a feasible coloring. A column j is sampled with probability p, keyed on
/// (seed, i, j); sampled columns run a rounder per column and color newly
/// matched edges with a color opened on first use. Edges left after the last
/// phase are colored greedily from a disjoint range.
inline ColoringRun algorithm2_unknown_delta(const OnlineInstance& inst, const PhaseConfig& cfg, std::uint64_t seed) {
  require_valid(inst);
  if (inst.kind != InstanceKind::bipartite_one_sided)
    throw std::invalid_argument("the unknown-delta algorithm needs a one-sided bipartite instance");
  if (!(cfg.p > 0.0 && cfg.p < 1.0)) throw std::invalid_argument("p must be in (0, 1)");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon <= 1.0)) throw std::invalid_argument("epsilon must be in (0, 1]");
  const std::uint32_t phases = cfg.num_phases.value_or(default_num_phases(cfg.p));
  if (phases < 1) throw std::invalid_argument("need at least one phase");

  const std::size_t n = inst.vertex_count();
  double alpha = 1.0;
  WaterFillConfig wf;
  wf.beta = cfg.beta;
  std::optional<std::uint32_t> known;
  switch (cfg.frac) {
    case FractionalAlgo::bounded:
      alpha = theoretical_bound(cfg.beta, InstanceKind::bipartite_one_sided);
      wf.epsilon_bound = cfg.epsilon;
      wf.delta_floor = cfg.delta_prime;
      break;
    case FractionalAlgo::unbounded:
      alpha = 2.0;
      wf.mode = FillMode::unbounded;
      break;
    case FractionalAlgo::trivial:
      known = inst.declared_max_degree.value_or(max_degree(inst));
      break;
  }
  const auto universe = static_cast<std::size_t>(std::ceil(alpha * n));

  std::vector<FractionalEngine> engines;
  engines.reserve(phases);
  for (std::uint32_t i = 0; i < phases; ++i) engines.emplace_back(n, cfg.frac, wf, known, false, false);
  std::vector<std::vector<std::unique_ptr<detail::SeededRounder>>> rounders(phases);
  std::vector<std::vector<char>> nontrivial(phases);

  ColoringRun run{IntegralColoring(inst)};
  run.delta = max_degree(inst);
  run.phases.resize(phases);
  UsedColors greedy(n);
  std::uint32_t next_color = 0;

  struct Offer {
    Candidate cand;
    std::size_t edge;
  };
  std::vector<std::vector<Offer>> buckets(universe);
  std::vector<std::uint32_t> touched;
  std::vector<Neighbor> sub;
  std::vector<std::size_t> sub_edge;
  std::vector<ColorValue> stretched;
  std::vector<Candidate> cands;

  EdgeId first = 0;
  for (std::size_t a = 0; a < inst.arrivals.size(); ++a) {
    const VertexId v = inst.arrival_vertex(a);
    const auto count = static_cast<EdgeId>(inst.arrivals[a].neighbors.size());
    for (std::uint32_t i = 0; i < phases; ++i) {
      sub.clear();
      sub_edge.clear();
      for (EdgeId e = first; e < first + count; ++e)
        if (auto r = run.coloring.uncolored_copies(e); r > 0) {
          sub.push_back({run.coloring.edge(e).earlier, r});
          sub_edge.push_back(e);
        }
      if (sub.empty()) break;

      auto& engine = engines[i];
      engine.arrive(v, sub);
      run.phases[i].max_degree = engine.current_max_degree();
      touched.clear();
      for (std::size_t k = 0; k < sub.size(); ++k) {
        for (const auto& cv : engine.arrival_values(k))
          if (cv.value > cfg.epsilon * sub[k].multiplicity + 1e-12)
            throw std::runtime_error("epsilon-boundedness violated: edge " + std::to_string(sub_edge[k]) +
                                     " color " + std::to_string(cv.color + 1) + " value " +
                                     std::to_string(cv.value));
        stretch_values(engine.arrival_values(k), alpha, stretched);
        for (const auto& cv : stretched) {
          const std::uint32_t j = cv.color;
          if (j >= nontrivial[i].size()) nontrivial[i].resize(j + 1, 0);
          if (!nontrivial[i][j]) {
            nontrivial[i][j] = 1;
            ++run.phases[i].nontrivial_columns;
          }
          if (!keyed_bernoulli(cfg.p, seed, {0x616c6732ULL, i, j})) continue;
          if (j >= buckets.size()) buckets.resize(j + 1);
          if (buckets[j].empty()) touched.push_back(j);
          buckets[j].push_back({{sub[k].vertex, cv.value}, sub_edge[k]});
        }
      }
      std::sort(touched.begin(), touched.end());
      for (std::uint32_t j : touched) {
        auto& slots = rounders[i];
        if (j >= slots.size()) slots.resize(j + 1);
        if (!slots[j]) {
          slots[j] = std::make_unique<detail::SeededRounder>(n, derive_seed(seed, {0x726f756eULL, i, j}));
          slots[j]->color = next_color++;
          ++run.phases[i].colors_used;
        }
        auto& col = *slots[j];
        cands.clear();
        for (const auto& o : buckets[j]) cands.push_back(o.cand);
        const auto hit = col.rounder.step(cands, col.rng.uniform());
        if (hit) {
          const std::size_t e = buckets[j][*hit].edge;
          if (run.coloring.uncolored_copies(static_cast<EdgeId>(e)) > 0) {
            run.coloring.assign(static_cast<EdgeId>(e), {ColorKind::phase, col.color});
            ++run.phases[i].edges_colored;
          }
        }
        buckets[j].clear();
      }
    }
    detail::finish_with_greedy(run.coloring, greedy, first, count, run.uncolored_before_greedy);
    first += count;
  }

  run.colors_phases = run.coloring.distinct(ColorKind::phase);
  run.colors_greedy = run.coloring.distinct(ColorKind::greedy);
  run.colors_total = run.colors_phases + run.colors_greedy;
  return run;
}

/// Degree schedule of the known-delta algorithm.
struct KnownDeltaSchedule {
  std::uint32_t ell = 1;
  double decrement = 0.0;
  std::vector<double> d;
  bool degenerate = false;
};

inline KnownDeltaSchedule known_delta_schedule(std::uint32_t delta, std::size_t n, const PhaseConfig& cfg) {
  if (delta < 1) throw std::invalid_argument("delta must be positive");
  const double ln_n = log_vertices(n);
  KnownDeltaSchedule s;
  s.ell = cfg.ell.value_or(static_cast<std::uint32_t>(std::floor(std::sqrt(delta * ln_n))));
  s.ell = std::clamp<std::uint32_t>(s.ell, 1, delta);
  s.decrement = s.ell - cfg.slack * std::sqrt(s.ell * ln_n);
  s.degenerate = s.decrement <= 0.0;
  const std::uint32_t phases = cfg.max_phases.value_or(delta / s.ell);
  for (std::uint32_t i = 0; i < phases && i * s.ell + s.ell <= delta; ++i) {
    const double d = delta - i * s.decrement;
    if (d < 1.0) break;
    s.d.push_back(d);
  }
  return s;
}

namespace detail {

/// Phases of `ell` independent MARKING copies each; phase i uses d[i] and
/// colors base + i*ell + c. All copies of a phase see the arrival's edges in
/// U_i as they were when the phase began.
inline void run_marking_phases(const OnlineInstance& inst, ColoringRun& run, std::uint32_t ell,
                               const std::vector<double>& d, std::uint64_t seed) {
  const std::size_t n = inst.vertex_count();
  const auto phases = static_cast<std::uint32_t>(d.size());
  std::vector<std::vector<std::unique_ptr<SeededRounder>>> rounders(phases);
  for (auto& r : rounders) r.resize(ell);
  std::vector<std::vector<std::uint32_t>> degree(phases, std::vector<std::uint32_t>(n, 0));
  std::vector<std::vector<char>> flagged(phases, std::vector<char>(n, 0));
  run.phases.assign(phases, {});
  for (std::uint32_t i = 0; i < phases; ++i) run.phases[i].degree_bound = d[i];
  UsedColors greedy(n);

  std::vector<std::uint32_t> snapshot;
  std::vector<Candidate> cands;
  std::vector<EdgeId> cand_edge;
  EdgeId first = 0;
  for (std::size_t a = 0; a < inst.arrivals.size(); ++a) {
    const VertexId v = inst.arrival_vertex(a);
    const auto count = static_cast<EdgeId>(inst.arrivals[a].neighbors.size());
    for (std::uint32_t i = 0; i < phases; ++i) {
      auto& deg = degree[i];
      auto& stats = run.phases[i];
      std::uint32_t deg_v = 0;
      snapshot.assign(count, 0);
      for (EdgeId k = 0; k < count; ++k) {
        snapshot[k] = run.coloring.uncolored_copies(first + k);
        deg_v += snapshot[k];
      }
      if (deg_v == 0) break;
      auto note = [&](VertexId x) {
        stats.max_degree = std::max(stats.max_degree, deg[x]);
        if (deg[x] > d[i] && !flagged[i][x]) {
          flagged[i][x] = 1;
          ++run.degree_violations;
        }
      };
      for (EdgeId k = 0; k < count; ++k)
        if (snapshot[k] > 0) {
          const VertexId u = run.coloring.edge(first + k).earlier;
          deg[u] += snapshot[k];
          note(u);
        }
      deg[v] += deg_v;
      note(v);

      const double scale = std::max<double>(d[i], deg_v);
      cands.clear();
      cand_edge.clear();
      for (EdgeId k = 0; k < count; ++k)
        if (snapshot[k] > 0) {
          cands.push_back({run.coloring.edge(first + k).earlier, snapshot[k] / scale});
          cand_edge.push_back(first + k);
        }
      for (std::uint32_t c = 0; c < ell; ++c) {
        auto& slot = rounders[i][c];
        if (!slot) slot = std::make_unique<SeededRounder>(n, derive_seed(seed, {0x6d61726bULL, i, c}));
        const auto hit = slot->rounder.step(cands, slot->rng.uniform());
        if (hit && run.coloring.uncolored_copies(cand_edge[*hit]) > 0) {
          run.coloring.assign(cand_edge[*hit], {ColorKind::phase, i * ell + c});
          ++stats.edges_colored;
        }
      }
    }
    finish_with_greedy(run.coloring, greedy, first, count, run.uncolored_before_greedy);
    first += count;
  }
  for (auto& s : run.phases) s.colors_used = ell;
}

inline void tally_palette(ColoringRun& run, std::uint32_t reserved) {
  run.colors_phases = run.coloring.distinct(ColorKind::phase);
  run.colors_greedy = run.coloring.distinct(ColorKind::greedy);
  // Greedy colors are numbered from reserved + 1 on.
  const std::uint32_t greedy_span = run.coloring.span_of(ColorKind::greedy);
  run.colors_total = greedy_span > 0 ? reserved + greedy_span : run.coloring.span_of(ColorKind::phase);
}

}  // namespace detail

/// Improved algorithm for known delta: floor(delta/ell) phases of ell colors;
/// phase i runs ell copies of MARKING_{d_i} on U_i. Leftover edges are
/// colored greedily with colors delta+1, delta+2, ...; colors_total is the
/// palette span. Degree-bound violations are counted, and the offending
/// arrival's values are scaled down to stay a fractional matching.
inline ColoringRun algorithm3_known_delta(const OnlineInstance& inst, std::uint32_t delta, const PhaseConfig& cfg,
                                          std::uint64_t seed) {
  require_valid(inst);
  if (inst.kind != InstanceKind::bipartite_one_sided)
    throw std::invalid_argument("the known-delta algorithm needs a one-sided bipartite instance");
  if (delta < max_degree(inst)) throw std::invalid_argument("declared delta is below the actual maximum degree");
  const auto schedule = known_delta_schedule(delta, inst.vertex_count(), cfg);
  ColoringRun run{IntegralColoring(inst)};
  run.delta = delta;
  run.schedule_degenerate = schedule.degenerate;
  detail::run_marking_phases(inst, run, schedule.ell, schedule.d, seed);
  detail::tally_palette(run, delta);
  return run;
}

/// Baseline: `rounds` copies of MARKING_d over the whole input (one phase),
/// then greedy. Defaults: d = rounds = delta.
inline ColoringRun repeated_marking_baseline(const OnlineInstance& inst, std::uint64_t seed,
                                             std::optional<std::uint32_t> rounds = std::nullopt,
                                             std::optional<std::uint32_t> d = std::nullopt) {
  require_valid(inst);
  if (inst.kind != InstanceKind::bipartite_one_sided)
    throw std::invalid_argument("repeated marking needs a one-sided bipartite instance");
  ColoringRun run{IntegralColoring(inst)};
  run.delta = inst.declared_max_degree.value_or(max_degree(inst));
  const std::uint32_t r = rounds.value_or(run.delta);
  detail::run_marking_phases(inst, run, r, {static_cast<double>(d.value_or(run.delta))}, seed);
  detail::tally_palette(run, r);
  return run;
}

/// Per-phase degree-decrease outcome: among phases with max deg(U_i) <= d_i,
/// how many end with max deg(U_{i+1}) > d_{i+1}.
struct DegreeDecreaseCheck {
  std::uint32_t conditioned = 0;
  std::uint32_t failures = 0;
};

inline DegreeDecreaseCheck degree_decrease_check(const ColoringRun& run) {
  DegreeDecreaseCheck out;
  for (std::size_t i = 0; i + 1 < run.phases.size(); ++i) {
    const auto& cur = run.phases[i];
    const auto& next = run.phases[i + 1];
    if (!cur.degree_bound || !next.degree_bound || cur.max_degree > *cur.degree_bound) continue;
    ++out.conditioned;
    if (next.max_degree > *next.degree_bound) ++out.failures;
  }
  return out;
}

}  // namespace edgecolor
