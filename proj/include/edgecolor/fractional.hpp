#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "edgecolor/graph.hpp"

namespace edgecolor {

/// A (color, value) pair of a fractional edge coloring. Colors are 0-based
/// internally and printed 1-based.
struct ColorValue {
  std::uint32_t color = 0;
  double value = 0.0;

  friend bool operator==(const ColorValue&, const ColorValue&) = default;
};

/// Per-edge color values plus per-vertex load tables. A merged edge of
/// multiplicity w carries total value w.
class FractionalColoring {
 public:
  FractionalColoring() = default;
  FractionalColoring(std::size_t vertex_count, bool retain_values)
      : retain_(retain_values), load_(vertex_count) {}

  EdgeId add_edge(const EdgeRecord& e, std::uint32_t delta_at_assignment) {
    edges_.push_back(e);
    delta_.push_back(delta_at_assignment);
    if (retain_) values_.emplace_back();
    return static_cast<EdgeId>(edges_.size() - 1);
  }

  /// Adds `value` of color `c` to edge e and to both endpoint loads.
  void assign(EdgeId e, std::uint32_t c, double value) {
    record(e, c, value);
    row(edges_[e].earlier, c + 1)[c] += value;
    row(edges_[e].arriving, c + 1)[c] += value;
  }

  /// Stores a value without touching loads; the caller maintains them.
  void record(EdgeId e, std::uint32_t c, double value) {
    if (value <= 0.0) return;
    colors_used_ = std::max(colors_used_, c + 1);
    if (retain_) values_[e].push_back({c, value});
  }

  /// Load row of v, grown to at least `min_size` colors.
  std::vector<double>& row(VertexId v, std::size_t min_size) {
    auto& r = load_[v];
    if (r.size() < min_size) r.resize(min_size, 0.0);
    return r;
  }

  bool retains_values() const { return retain_; }
  std::size_t vertex_count() const { return load_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const EdgeRecord& edge(EdgeId e) const { return edges_[e]; }
  std::uint32_t delta_at_assignment(EdgeId e) const { return delta_[e]; }

  std::span<const ColorValue> values(EdgeId e) const {
    if (!retain_) throw std::logic_error("fractional values were not retained");
    return values_[e];
  }

  std::span<const double> loads(VertexId v) const { return load_[v]; }
  double load(VertexId v, std::uint32_t c) const { return c < load_[v].size() ? load_[v][c] : 0.0; }

  /// One past the highest color with a nonzero value.
  std::uint32_t colors_used() const { return colors_used_; }

  double max_load() const {
    double m = 0.0;
    for (const auto& r : load_)
      for (double l : r) m = std::max(m, l);
    return m;
  }

 private:
  bool retain_ = true;
  std::vector<EdgeRecord> edges_;
  std::vector<std::uint32_t> delta_;
  std::vector<std::vector<ColorValue>> values_;
  std::vector<std::vector<double>> load_;
  std::uint32_t colors_used_ = 0;
};

/// Checks per-edge sums, non-negativity and load-table consistency.
inline std::optional<std::string> check_fractional_invariants(const FractionalColoring& fc,
                                                              double tol = 1e-9) {
  std::vector<std::vector<double>> recomputed(fc.vertex_count());
  for (EdgeId e = 0; e < fc.edge_count(); ++e) {
    const auto& rec = fc.edge(e);
    double sum = 0.0;
    for (const auto& cv : fc.values(e)) {
      if (cv.value < 0.0) return "edge " + std::to_string(e) + " has a negative value";
      sum += cv.value;
      for (VertexId v : {rec.earlier, rec.arriving}) {
        auto& r = recomputed[v];
        if (r.size() <= cv.color) r.resize(cv.color + 1, 0.0);
        r[cv.color] += cv.value;
      }
    }
    if (std::abs(sum - rec.multiplicity) > tol * rec.multiplicity)
      return "edge " + std::to_string(e) + " sums to " + std::to_string(sum);
  }
  for (VertexId v = 0; v < fc.vertex_count(); ++v) {
    const auto stored = fc.loads(v);
    const auto& again = recomputed[v];
    for (std::size_t c = 0; c < std::max(stored.size(), again.size()); ++c) {
      const double a = c < stored.size() ? stored[c] : 0.0;
      const double b = c < again.size() ? again[c] : 0.0;
      if (std::abs(a - b) > tol)
        return "load of vertex " + std::to_string(v) + " color " + std::to_string(c + 1) + " is " +
               std::to_string(a) + ", recomputed " + std::to_string(b);
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Water filling

enum class FillMode { bounded, unbounded };

struct WaterFillConfig {
  double beta = std::numbers::e / (std::numbers::e - 1.0);
  FillMode mode = FillMode::bounded;
  /// Caps every x_{e,c} at epsilon by never letting the effective degree
  /// drop below ceil(beta / epsilon).
  std::optional<double> epsilon_bound;
  /// Initial lower bound on the maximum degree.
  std::uint32_t delta_floor = 1;
  double tolerance = 1e-12;
};

enum class FractionalAlgo { trivial, bounded, unbounded };

inline const char* to_string(FractionalAlgo a) {
  switch (a) {
    case FractionalAlgo::trivial: return "trivial";
    case FractionalAlgo::bounded: return "bwf";
    case FractionalAlgo::unbounded: return "uwf";
  }
  return "unknown";
}

inline FractionalAlgo parse_fractional_algo(const std::string& s) {
  if (s == "trivial") return FractionalAlgo::trivial;
  if (s == "bwf") return FractionalAlgo::bounded;
  if (s == "uwf") return FractionalAlgo::unbounded;
  throw std::invalid_argument("unknown fractional algorithm '" + s + "'");
}

/// Load of one vertex at one of its steps, by rank in its frozen color order.
struct TraceRow {
  std::uint32_t step;
  VertexId vertex;
  std::uint32_t color_rank;
  double load;
};

inline void write_trace_csv(std::ostream& os, std::span<const TraceRow> rows) {
  os << "step,vertex,color_rank,load\n";
  for (const auto& r : rows) os << r.step << ',' << r.vertex << ',' << r.color_rank + 1 << ',' << r.load << '\n';
}

/// Returns a description of the first (vertex, step) whose loads are not
/// non-increasing in rank order.
inline std::optional<std::string> check_order_monotonicity(std::span<const TraceRow> rows, double tol = 1e-9) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& a = rows[i - 1];
    const auto& b = rows[i];
    if (a.vertex != b.vertex || a.step != b.step || b.color_rank != a.color_rank + 1) continue;
    if (b.load > a.load + tol)
      return "vertex " + std::to_string(b.vertex) + " step " + std::to_string(b.step) + ": rank " +
             std::to_string(b.color_rank + 1) + " load " + std::to_string(b.load) + " exceeds rank " +
             std::to_string(a.color_rank + 1) + " load " + std::to_string(a.load);
  }
  return std::nullopt;
}

namespace detail {

/// Smallest h with sum_c clamp(h - key_c, 0, cap) = w. cap may be infinite.
inline double water_level(std::span<const double> keys, double cap, double w, std::vector<std::pair<double, int>>& ev) {
  ev.clear();
  const bool capped = std::isfinite(cap);
  for (double k : keys) {
    ev.emplace_back(k, +1);
    if (capped) ev.emplace_back(k + cap, -1);
  }
  std::sort(ev.begin(), ev.end());
  double pos = ev.front().first;
  double filled = 0.0;
  int slope = 0;
  for (const auto& [p, d] : ev) {
    if (slope > 0) {
      const double next = filled + slope * (p - pos);
      if (next >= w) return pos + (w - filled) / slope;
      filled = next;
    }
    pos = p;
    slope += d;
  }
  if (slope > 0) return pos + (w - filled) / slope;
  throw std::logic_error("water filling cannot complete: capacities sum below edge weight");
}

}  // namespace detail

/// Online fractional edge coloring engine. Arrivals are fed one at a time;
/// the engine tracks its own degrees, so it can run on any online subgraph
/// (for instance the uncolored part of a larger graph).
class FractionalEngine {
 public:
  FractionalEngine(std::size_t vertex_count, FractionalAlgo algo, WaterFillConfig cfg = {},
                   std::optional<std::uint32_t> known_delta = std::nullopt, bool retain_values = true,
                   bool trace = false)
      : algo_(algo),
        cfg_(cfg),
        known_delta_(known_delta),
        trace_enabled_(trace),
        fc_(vertex_count, retain_values),
        degree_(vertex_count, 0) {
    if (algo == FractionalAlgo::bounded && !(cfg.beta > 1.0 && cfg.beta < 2.0))
      throw std::invalid_argument("bounded water filling needs beta in (1, 2)");
    if (algo == FractionalAlgo::trivial && (!known_delta || *known_delta == 0))
      throw std::invalid_argument("trivial fractional coloring needs a positive known delta");
    if (cfg.epsilon_bound && !(*cfg.epsilon_bound > 0.0 && *cfg.epsilon_bound <= 1.0))
      throw std::invalid_argument("epsilon bound must be in (0, 1]");
    if (trace) sigma_.resize(vertex_count);
  }

  /// Colors the edges from v to `neighbors`; returns the id of the first new
  /// edge (ids of one arrival are consecutive).
  EdgeId arrive(VertexId v, std::span<const Neighbor> neighbors) {
    for (const auto& nb : neighbors) {
      degree_[nb.vertex] += nb.multiplicity;
      degree_[v] += nb.multiplicity;
      max_degree_ = std::max(max_degree_, degree_[nb.vertex]);
    }
    max_degree_ = std::max(max_degree_, degree_[v]);
    const std::uint32_t delta = effective_delta();

    const auto first = static_cast<EdgeId>(fc_.edge_count());
    arrival_values_.clear();
    arrival_offsets_.assign(1, 0);
    for (const auto& nb : neighbors) {
      if (trace_enabled_) freeze(nb.vertex);
      const EdgeId e = fc_.add_edge({nb.vertex, v, nb.multiplicity, arrivals_}, delta);
      fill(e, nb.vertex, v, nb.multiplicity, delta);
      arrival_offsets_.push_back(arrival_values_.size());
      if (trace_enabled_) record_trace(nb.vertex);
    }
    if (trace_enabled_) freeze(v);
    ++arrivals_;
    return first;
  }

  /// The degree bound used for edges of the latest arrival.
  std::uint32_t effective_delta() const {
    if (algo_ == FractionalAlgo::trivial) {
      if (max_degree_ > *known_delta_)
        throw std::invalid_argument("known delta " + std::to_string(*known_delta_) +
                                    " is below the actual degree " + std::to_string(max_degree_));
      return *known_delta_;
    }
    std::uint32_t d = std::max(max_degree_, cfg_.delta_floor);
    if (cfg_.epsilon_bound && *cfg_.epsilon_bound < 1.0 && algo_ == FractionalAlgo::bounded)
      d = std::max(d, static_cast<std::uint32_t>(std::ceil(cfg_.beta / *cfg_.epsilon_bound - 1e-12)));
    return d;
  }

  /// Per-copy cap for the latest arrival, or infinity when uncapped.
  double cap_per_copy() const {
    if (algo_ == FractionalAlgo::bounded) return cfg_.beta / effective_delta();
    if (algo_ == FractionalAlgo::trivial) return 1.0 / effective_delta();
    return std::numeric_limits<double>::infinity();
  }

  const FractionalColoring& coloring() const { return fc_; }
  FractionalColoring& coloring() { return fc_; }
  std::uint32_t current_max_degree() const { return max_degree_; }
  std::uint32_t degree(VertexId v) const { return degree_[v]; }
  const std::vector<TraceRow>& trace() const { return trace_; }
  FractionalAlgo algo() const { return algo_; }
  const WaterFillConfig& config() const { return cfg_; }

  /// Values given to the k-th edge of the latest arrival; valid until the
  /// next arrival.
  std::span<const ColorValue> arrival_values(std::size_t k) const {
    return std::span<const ColorValue>(arrival_values_).subspan(arrival_offsets_[k],
                                                                arrival_offsets_[k + 1] - arrival_offsets_[k]);
  }

 private:
  void fill(EdgeId e, VertexId u, VertexId v, std::uint32_t w, std::uint32_t delta) {
    auto& lu = fc_.row(u, delta);
    auto& lv = fc_.row(v, delta);
    if (algo_ == FractionalAlgo::trivial) {
      const double x = static_cast<double>(w) / delta;
      for (std::uint32_t c = 0; c < delta; ++c) put(e, c, x, lu, lv);
      return;
    }
    keys_.resize(delta);
    const bool bounded = algo_ == FractionalAlgo::bounded;
    for (std::uint32_t c = 0; c < delta; ++c) keys_[c] = bounded ? lu[c] : std::max(lu[c], lv[c]);
    const double cap = bounded ? w * cfg_.beta / delta : std::numeric_limits<double>::infinity();
    const double h = detail::water_level(keys_, cap, static_cast<double>(w), events_);
    for (std::uint32_t c = 0; c < delta; ++c) {
      const double x = std::clamp(h - keys_[c], 0.0, cap);
      if (x <= 0.0) continue;
      const bool u_at_key = bounded || lu[c] >= lv[c];
      put(e, c, x, lu, lv);
      // Colors that end at the water level get it exactly, keeping ties exact.
      if (x < cap) (u_at_key ? lu[c] : lv[c]) = h;
    }
  }

  void put(EdgeId e, std::uint32_t c, double x, std::vector<double>& lu, std::vector<double>& lv) {
    fc_.record(e, c, x);
    lu[c] += x;
    lv[c] += x;
    arrival_values_.push_back({c, x});
  }

  void freeze(VertexId v) {
    auto& s = sigma_[v];
    if (s.frozen) return;
    s.frozen = true;
    const auto loads = fc_.loads(v);
    s.order.resize(loads.size());
    for (std::uint32_t c = 0; c < loads.size(); ++c) s.order[c] = c;
    std::stable_sort(s.order.begin(), s.order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return loads[a] > loads[b]; });
  }

  void record_trace(VertexId u) {
    const auto& s = sigma_[u];
    const auto loads = fc_.loads(u);
    for (std::uint32_t rank = 0; rank < loads.size(); ++rank) {
      const std::uint32_t c = rank < s.order.size() ? s.order[rank] : rank;
      trace_.push_back({degree_[u], u, rank, loads[c]});
    }
  }

  struct Sigma {
    bool frozen = false;
    std::vector<std::uint32_t> order;
  };

  FractionalAlgo algo_;
  WaterFillConfig cfg_;
  std::optional<std::uint32_t> known_delta_;
  bool trace_enabled_;
  FractionalColoring fc_;
  std::vector<std::uint32_t> degree_;
  std::uint32_t max_degree_ = 0;
  std::uint32_t arrivals_ = 0;
  std::vector<double> keys_;
  std::vector<std::pair<double, int>> events_;
  std::vector<ColorValue> arrival_values_;
  std::vector<std::size_t> arrival_offsets_;
  std::vector<Sigma> sigma_;
  std::vector<TraceRow> trace_;
};

struct FractionalRun {
  FractionalColoring coloring;
  std::vector<TraceRow> trace;
};

inline FractionalRun run_fractional(const OnlineInstance& inst, FractionalAlgo algo, WaterFillConfig cfg = {},
                                    bool retain_values = true, bool trace = false) {
  require_valid(inst);
  std::optional<std::uint32_t> known;
  if (algo == FractionalAlgo::trivial) known = inst.declared_max_degree.value_or(max_degree(inst));
  FractionalEngine engine(inst.vertex_count(), algo, cfg, known, retain_values, trace);
  for (std::size_t i = 0; i < inst.arrivals.size(); ++i)
    engine.arrive(inst.arrival_vertex(i), inst.arrivals[i].neighbors);
  return {std::move(engine.coloring()), engine.trace()};
}

/// x_{e,c} = 1/delta for every color c <= delta.
inline FractionalColoring trivial_known_delta(const OnlineInstance& inst, std::uint32_t delta) {
  if (delta < max_degree(inst)) throw std::invalid_argument("delta is smaller than the actual maximum degree");
  require_valid(inst);
  FractionalEngine engine(inst.vertex_count(), FractionalAlgo::trivial, {}, delta);
  for (std::size_t i = 0; i < inst.arrivals.size(); ++i)
    engine.arrive(inst.arrival_vertex(i), inst.arrivals[i].neighbors);
  return std::move(engine.coloring());
}

inline FractionalColoring bounded_water_filling(const OnlineInstance& inst, double beta,
                                                std::optional<double> epsilon_bound = std::nullopt) {
  WaterFillConfig cfg;
  cfg.beta = beta;
  cfg.epsilon_bound = epsilon_bound;
  return run_fractional(inst, FractionalAlgo::bounded, cfg).coloring;
}

inline FractionalColoring unbounded_water_filling(const OnlineInstance& inst) {
  WaterFillConfig cfg;
  cfg.mode = FillMode::unbounded;
  return run_fractional(inst, FractionalAlgo::unbounded, cfg).coloring;
}

/// alpha = max_{v,c} L_v(c).
inline double competitive_ratio(const FractionalColoring& fc) { return fc.max_load(); }

/// Guaranteed competitive ratio of bounded water filling with parameter beta.
inline double theoretical_bound(double beta, InstanceKind kind) {
  if (!(beta > 1.0 && beta < 2.0)) throw std::invalid_argument("beta must be in (1, 2)");
  if (kind == InstanceKind::bipartite_one_sided) return std::max(beta, beta * std::log(beta / (beta - 1.0)));
  return beta * beta - beta + beta * std::log(1.0 / (beta - 1.0));
}

// ---------------------------------------------------------------------------
// Stretching

/// Maps color c (0-based) to the band [c alpha, (c+1) alpha) of a line of
/// unit bins and splits its value over the bins by overlap. If every load is
/// at most alpha, every bin load is at most 1. Depends only on the edge's own
/// values, so it runs online.
inline void stretch_values(std::span<const ColorValue> in, double alpha, std::vector<ColorValue>& out) {
  out.clear();
  for (const auto& cv : in) {
    const double lo = cv.color * alpha;
    const double hi = (cv.color + 1.0) * alpha;
    for (auto bin = static_cast<std::uint32_t>(std::floor(lo)); bin < hi; ++bin) {
      const double overlap = std::min<double>(bin + 1.0, hi) - std::max<double>(bin, lo);
      if (overlap <= 0.0) continue;
      const double x = cv.value * overlap / alpha;
      if (!out.empty() && out.back().color == bin)
        out.back().value += x;
      else
        out.push_back({bin, x});
    }
  }
}

/// Number of unit bins the stretch of `colors` colors occupies.
inline std::uint32_t stretched_color_count(std::uint32_t colors, double alpha) {
  return static_cast<std::uint32_t>(std::ceil(colors * alpha - 1e-12));
}

inline FractionalColoring stretch_to_feasible(const FractionalColoring& fc, double alpha, double tol = 1e-9) {
  if (!(alpha >= 1.0)) throw std::invalid_argument("stretch factor must be at least 1");
  if (fc.max_load() > alpha + tol)
    throw std::invalid_argument("load " + std::to_string(fc.max_load()) + " exceeds stretch factor " +
                                std::to_string(alpha));
  FractionalColoring out(fc.vertex_count(), true);
  std::vector<ColorValue> buf;
  for (EdgeId e = 0; e < fc.edge_count(); ++e) {
    const EdgeId id = out.add_edge(fc.edge(e), fc.delta_at_assignment(e));
    stretch_values(fc.values(e), alpha, buf);
    for (const auto& cv : buf) {
      out.assign(id, cv.color, cv.value);
      const auto& rec = out.edge(id);
      if (out.load(rec.earlier, cv.color) > 1.0 + tol || out.load(rec.arriving, cv.color) > 1.0 + tol)
        throw std::logic_error("stretched load exceeds 1 at edge " + std::to_string(e));
    }
  }
  return out;
}

}  // namespace edgecolor
