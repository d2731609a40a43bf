#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "edgecolor/graph.hpp"
#include "edgecolor/rng.hpp"

namespace edgecolor {

/// Phase colors come from the randomized phases; greedy colors live in a
/// disjoint range. Index is 0-based within its range.
enum class ColorKind : std::uint8_t { phase, greedy };

struct Color {
  ColorKind kind = ColorKind::phase;
  std::uint32_t index = 0;

  friend auto operator<=>(const Color&, const Color&) = default;
};

inline std::string to_string(const Color& c) {
  return std::string(c.kind == ColorKind::phase ? "phase:" : "greedy:") + std::to_string(c.index + 1);
}

/// A set of edges with no shared endpoint.
class Matching {
 public:
  /// Returns false (and leaves the matching unchanged) if an endpoint is taken.
  bool insert(EdgeId e, VertexId a, VertexId b) {
    if (a == b || std::binary_search(vertices_.begin(), vertices_.end(), a) ||
        std::binary_search(vertices_.begin(), vertices_.end(), b))
      return false;
    vertices_.insert(std::upper_bound(vertices_.begin(), vertices_.end(), a), a);
    vertices_.insert(std::upper_bound(vertices_.begin(), vertices_.end(), b), b);
    edges_.push_back(e);
    return true;
  }
  std::span<const EdgeId> edges() const { return edges_; }
  std::size_t size() const { return edges_.size(); }

 private:
  std::vector<EdgeId> edges_;
  std::vector<VertexId> vertices_;
};

/// One color per parallel copy of every merged edge.
class IntegralColoring {
 public:
  IntegralColoring() = default;
  explicit IntegralColoring(const OnlineInstance& inst) : edges_(edge_table(inst)), vertex_count_(inst.vertex_count()) {
    offset_.reserve(edges_.size() + 1);
    offset_.push_back(0);
    for (const auto& e : edges_) offset_.push_back(offset_.back() + e.multiplicity);
    colors_.assign(offset_.back(), std::nullopt);
    colored_.assign(edges_.size(), 0);
  }

  std::size_t edge_count() const { return edges_.size(); }
  std::size_t vertex_count() const { return vertex_count_; }
  const EdgeRecord& edge(EdgeId e) const { return edges_[e]; }
  std::span<const EdgeRecord> edges() const { return edges_; }

  std::uint32_t uncolored_copies(EdgeId e) const { return edges_[e].multiplicity - colored_[e]; }

  /// Colors the next uncolored copy of e.
  void assign(EdgeId e, Color c) {
    if (uncolored_copies(e) == 0) throw std::logic_error("edge " + std::to_string(e) + " is already colored");
    colors_[offset_[e] + colored_[e]++] = c;
  }

  std::span<const std::optional<Color>> copies(EdgeId e) const {
    return std::span<const std::optional<Color>>(colors_).subspan(offset_[e], edges_[e].multiplicity);
  }

  /// Overwrites a copy's color; meant for tests that tamper with a coloring.
  void overwrite(EdgeId e, std::size_t copy, Color c) { colors_[offset_[e] + copy] = c; }

  std::size_t uncolored_total() const {
    std::size_t n = 0;
    for (EdgeId e = 0; e < edges_.size(); ++e) n += uncolored_copies(e);
    return n;
  }

  /// Number of distinct colors of the given kind in use.
  std::uint32_t distinct(ColorKind kind) const {
    std::vector<std::uint32_t> idx;
    for (const auto& c : colors_)
      if (c && c->kind == kind) idx.push_back(c->index);
    std::sort(idx.begin(), idx.end());
    return static_cast<std::uint32_t>(std::unique(idx.begin(), idx.end()) - idx.begin());
  }

  /// One past the largest index of the given kind in use (0 if none).
  std::uint32_t span_of(ColorKind kind) const {
    std::uint32_t s = 0;
    for (const auto& c : colors_)
      if (c && c->kind == kind) s = std::max(s, c->index + 1);
    return s;
  }

  /// Edge copies per color class.
  std::map<Color, std::vector<EdgeId>> classes() const {
    std::map<Color, std::vector<EdgeId>> out;
    for (EdgeId e = 0; e < edges_.size(); ++e)
      for (const auto& c : copies(e))
        if (c) out[*c].push_back(e);
    return out;
  }

 private:
  std::vector<EdgeRecord> edges_;
  std::size_t vertex_count_ = 0;
  std::vector<std::size_t> offset_;
  std::vector<std::optional<Color>> colors_;
  std::vector<std::uint32_t> colored_;
};

struct ColoringViolation {
  enum class Kind { uncolored, conflict, instance_mismatch } kind;
  VertexId vertex;
  std::optional<Color> color;
  std::string message;
};

/// Checks that every copy is colored and that no vertex sees a color twice.
inline std::optional<ColoringViolation> validate_coloring(const IntegralColoring& coloring,
                                                          const OnlineInstance& inst) {
  const auto table = edge_table(inst);
  if (table.size() != coloring.edge_count())
    return ColoringViolation{ColoringViolation::Kind::instance_mismatch, 0, std::nullopt,
                             "coloring has " + std::to_string(coloring.edge_count()) + " edges, instance has " +
                                 std::to_string(table.size())};
  std::vector<std::vector<Color>> seen(inst.vertex_count());
  for (EdgeId e = 0; e < table.size(); ++e) {
    const auto& rec = coloring.edge(e);
    if (rec.earlier != table[e].earlier || rec.arriving != table[e].arriving ||
        rec.multiplicity != table[e].multiplicity)
      return ColoringViolation{ColoringViolation::Kind::instance_mismatch, rec.arriving, std::nullopt,
                               "edge " + std::to_string(e) + " does not match the instance"};
    for (const auto& c : coloring.copies(e)) {
      if (!c)
        return ColoringViolation{ColoringViolation::Kind::uncolored, rec.arriving, std::nullopt,
                                 "edge " + std::to_string(e) + " has an uncolored copy"};
      seen[rec.earlier].push_back(*c);
      seen[rec.arriving].push_back(*c);
    }
  }
  for (VertexId v = 0; v < seen.size(); ++v) {
    auto& s = seen[v];
    std::sort(s.begin(), s.end());
    if (auto it = std::adjacent_find(s.begin(), s.end()); it != s.end())
      return ColoringViolation{ColoringViolation::Kind::conflict, v, *it,
                               "vertex " + std::to_string(v) + " has two edges colored " + to_string(*it)};
  }
  return std::nullopt;
}

/// Per-vertex sets of used color indices of one kind.
class UsedColors {
 public:
  explicit UsedColors(std::size_t vertex_count) : used_(vertex_count) {}

  bool used(VertexId v, std::uint32_t c) const { return c < used_[v].size() && used_[v][c]; }
  void mark(VertexId v, std::uint32_t c) {
    auto& u = used_[v];
    if (u.size() <= c) u.resize(c + 1, 0);
    u[c] = 1;
  }
  std::uint32_t lowest_common_free(VertexId a, VertexId b) const {
    std::uint32_t c = 0;
    while (used(a, c) || used(b, c)) ++c;
    return c;
  }

 private:
  std::vector<std::vector<char>> used_;
};

/// Colors one uncolored copy of e with the lowest greedy color free at both
/// endpoints.
inline Color greedy_color_edge(IntegralColoring& coloring, UsedColors& greedy_used, EdgeId e) {
  const auto& rec = coloring.edge(e);
  const Color c{ColorKind::greedy, greedy_used.lowest_common_free(rec.earlier, rec.arriving)};
  coloring.assign(e, c);
  greedy_used.mark(rec.earlier, c.index);
  greedy_used.mark(rec.arriving, c.index);
  return c;
}

/// Per-phase bookkeeping of the randomized algorithms.
struct PhaseStats {
  /// Columns (colors) that received a nonzero value in this phase.
  std::uint32_t nontrivial_columns = 0;
  /// Colors opened in this phase (some may end up coloring nothing).
  std::uint32_t colors_used = 0;
  /// Degree bound of the phase (known-delta algorithm only).
  std::optional<double> degree_bound;
  /// Final maximum degree of the phase's input subgraph U_i.
  std::uint32_t max_degree = 0;
  std::uint64_t edges_colored = 0;
};

/// Result of one integral coloring run.
struct ColoringRun {
  IntegralColoring coloring;
  std::uint32_t delta = 0;
  std::uint32_t colors_phases = 0;
  std::uint32_t colors_greedy = 0;
  /// Colors used in total; for palettes with reserved ranges this is the span.
  std::uint32_t colors_total = 0;
  /// Edge copies left for the greedy stage.
  std::uint64_t uncolored_before_greedy = 0;
  std::vector<PhaseStats> phases;
  std::uint64_t degree_violations = 0;
  bool schedule_degenerate = false;
};

/// Every copy of every edge greedily, in arrival order.
inline ColoringRun greedy_coloring(const OnlineInstance& inst) {
  require_valid(inst);
  ColoringRun run{IntegralColoring(inst)};
  UsedColors used(inst.vertex_count());
  for (EdgeId e = 0; e < run.coloring.edge_count(); ++e)
    while (run.coloring.uncolored_copies(e) > 0) greedy_color_edge(run.coloring, used, e);
  run.delta = max_degree(inst);
  run.colors_greedy = run.coloring.distinct(ColorKind::greedy);
  run.colors_total = run.colors_greedy;
  run.uncolored_before_greedy = inst.edge_copy_count();
  return run;
}

/// For c = 1, 2, ...: match as many of the arrival's uncolored edges as
/// possible into color c, in edge order. Every color class is then a maximal
/// matching of the arrival-order prefix.
inline ColoringRun repeated_maximal_baseline(const OnlineInstance& inst) {
  require_valid(inst);
  if (inst.kind != InstanceKind::bipartite_one_sided)
    throw std::invalid_argument("repeated maximal matching needs a one-sided bipartite instance");
  ColoringRun run{IntegralColoring(inst)};
  UsedColors used(inst.vertex_count());
  EdgeId first = 0;
  for (std::size_t i = 0; i < inst.arrivals.size(); ++i) {
    const auto count = static_cast<EdgeId>(inst.arrivals[i].neighbors.size());
    std::uint64_t left = 0;
    for (EdgeId e = first; e < first + count; ++e) left += run.coloring.uncolored_copies(e);
    for (std::uint32_t c = 0; left > 0; ++c)
      for (EdgeId e = first; e < first + count; ++e) {
        const auto& rec = run.coloring.edge(e);
        if (run.coloring.uncolored_copies(e) == 0 || used.used(rec.earlier, c) || used.used(rec.arriving, c)) continue;
        run.coloring.assign(e, {ColorKind::phase, c});
        used.mark(rec.earlier, c);
        used.mark(rec.arriving, c);
        --left;
      }
    first += count;
  }
  run.delta = max_degree(inst);
  run.colors_phases = run.coloring.distinct(ColorKind::phase);
  run.colors_total = run.colors_phases;
  return run;
}

struct ClassSample {
  Color color;
  Matching matching;
};

/// Picks one color class uniformly at random and returns it as a matching.
inline ClassSample color_class_to_matching(const IntegralColoring& coloring, std::uint64_t seed) {
  const auto classes = coloring.classes();
  if (classes.empty()) throw std::invalid_argument("coloring has no color classes");
  Rng rng(derive_seed(seed, {0x636c617373ULL}));
  auto it = classes.begin();
  std::advance(it, static_cast<std::ptrdiff_t>(rng.below(classes.size())));
  ClassSample out{it->first, {}};
  for (EdgeId e : it->second)
    if (!out.matching.insert(e, coloring.edge(e).earlier, coloring.edge(e).arriving))
      throw std::logic_error("color class " + to_string(it->first) + " is not a matching");
  return out;
}

/// Mean color class size, |E| / (number of classes).
inline double mean_class_size(const IntegralColoring& coloring) {
  const auto classes = coloring.classes();
  std::size_t total = 0;
  for (const auto& [c, edges] : classes) total += edges.size();
  return classes.empty() ? 0.0 : static_cast<double>(total) / classes.size();
}

}  // namespace edgecolor
