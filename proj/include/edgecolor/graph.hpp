#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace edgecolor {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

enum class InstanceKind { bipartite_one_sided, general };

inline const char* to_string(InstanceKind kind) {
  return kind == InstanceKind::bipartite_one_sided ? "bipartite" : "general";
}

struct Neighbor {
  VertexId vertex = 0;
  std::uint32_t multiplicity = 1;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// One online vertex together with all of its edges to earlier vertices.
/// The order of `neighbors` is the edge-processing order.
struct ArrivalEvent {
  std::vector<Neighbor> neighbors;

  friend bool operator==(const ArrivalEvent&, const ArrivalEvent&) = default;
};

/// Vertices 0..offline_count-1 exist before the stream starts; arrival i
/// introduces vertex offline_count + i.
struct OnlineInstance {
  std::uint32_t offline_count = 0;
  std::vector<ArrivalEvent> arrivals;
  std::optional<std::uint32_t> declared_max_degree;
  InstanceKind kind = InstanceKind::bipartite_one_sided;

  std::size_t vertex_count() const { return offline_count + arrivals.size(); }
  VertexId arrival_vertex(std::size_t arrival_index) const {
    return static_cast<VertexId>(offline_count + arrival_index);
  }
  bool is_offline(VertexId v) const { return v < offline_count; }

  /// Number of merged edges (one per neighbor entry).
  std::size_t edge_count() const {
    std::size_t n = 0;
    for (const auto& a : arrivals) n += a.neighbors.size();
    return n;
  }

  /// Number of edges counting multiplicities.
  std::size_t edge_copy_count() const {
    std::size_t n = 0;
    for (const auto& a : arrivals)
      for (const auto& nb : a.neighbors) n += nb.multiplicity;
    return n;
  }

  friend bool operator==(const OnlineInstance&, const OnlineInstance&) = default;
};

/// A merged edge. `earlier` arrived (or existed) before `arriving`.
struct EdgeRecord {
  VertexId earlier = 0;
  VertexId arriving = 0;
  std::uint32_t multiplicity = 1;
  std::uint32_t arrival_index = 0;

  VertexId other(VertexId v) const { return v == earlier ? arriving : earlier; }
};

/// Edge ids in canonical order: by arrival, then by position in the
/// arrival's neighbor list.
inline std::vector<EdgeRecord> edge_table(const OnlineInstance& inst) {
  std::vector<EdgeRecord> edges;
  edges.reserve(inst.edge_count());
  for (std::size_t i = 0; i < inst.arrivals.size(); ++i) {
    const VertexId v = inst.arrival_vertex(i);
    for (const auto& nb : inst.arrivals[i].neighbors)
      edges.push_back({nb.vertex, v, nb.multiplicity, static_cast<std::uint32_t>(i)});
  }
  return edges;
}

/// Final degrees, counting multiplicities.
inline std::vector<std::uint32_t> final_degrees(const OnlineInstance& inst) {
  std::vector<std::uint32_t> deg(inst.vertex_count(), 0);
  for (std::size_t i = 0; i < inst.arrivals.size(); ++i) {
    const VertexId v = inst.arrival_vertex(i);
    for (const auto& nb : inst.arrivals[i].neighbors) {
      if (nb.vertex < deg.size()) deg[nb.vertex] += nb.multiplicity;
      deg[v] += nb.multiplicity;
    }
  }
  return deg;
}

inline std::uint32_t max_degree(const OnlineInstance& inst) {
  const auto deg = final_degrees(inst);
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
  bad_neighbor_reference,
  bipartite_violation,
  zero_multiplicity,
  duplicate_neighbor,
  wrong_declared_degree,
};

inline const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::bad_neighbor_reference: return "bad neighbor reference";
    case ViolationKind::bipartite_violation: return "bipartite violation";
    case ViolationKind::zero_multiplicity: return "zero multiplicity";
    case ViolationKind::duplicate_neighbor: return "duplicate neighbor";
    case ViolationKind::wrong_declared_degree: return "wrong declared max degree";
  }
  return "unknown";
}

struct InstanceViolation {
  ViolationKind kind;
  /// Offending arrival; equals arrivals.size() for whole-instance violations.
  std::size_t arrival_index;
  std::string message;
};

/// Returns the first violated instance invariant, or nullopt if the instance
/// is well formed.
inline std::optional<InstanceViolation> validate_instance(const OnlineInstance& inst) {
  std::unordered_set<VertexId> seen;
  for (std::size_t i = 0; i < inst.arrivals.size(); ++i) {
    const VertexId v = inst.arrival_vertex(i);
    seen.clear();
    for (const auto& nb : inst.arrivals[i].neighbors) {
      if (nb.vertex >= v)
        return InstanceViolation{ViolationKind::bad_neighbor_reference, i,
                                 "arrival " + std::to_string(i) + " references vertex " +
                                     std::to_string(nb.vertex) + " which has not arrived"};
      if (inst.kind == InstanceKind::bipartite_one_sided && !inst.is_offline(nb.vertex))
        return InstanceViolation{ViolationKind::bipartite_violation, i,
                                 "arrival " + std::to_string(i) + " references online vertex " +
                                     std::to_string(nb.vertex)};
      if (nb.multiplicity == 0)
        return InstanceViolation{ViolationKind::zero_multiplicity, i,
                                 "arrival " + std::to_string(i) + " has a zero multiplicity"};
      if (!seen.insert(nb.vertex).second)
        return InstanceViolation{ViolationKind::duplicate_neighbor, i,
                                 "arrival " + std::to_string(i) + " lists vertex " +
                                     std::to_string(nb.vertex) + " twice"};
    }
  }
  if (inst.declared_max_degree) {
    const auto actual = max_degree(inst);
    if (actual != *inst.declared_max_degree)
      return InstanceViolation{ViolationKind::wrong_declared_degree, inst.arrivals.size(),
                               "declared max degree " + std::to_string(*inst.declared_max_degree) +
                                   " but actual is " + std::to_string(actual)};
  }
  return std::nullopt;
}

inline void require_valid(const OnlineInstance& inst) {
  if (auto v = validate_instance(inst)) throw std::invalid_argument(v->message);
}

// ---------------------------------------------------------------------------
// Replay

/// Incrementally maintained view of the revealed graph.
class GraphView {
 public:
  explicit GraphView(std::size_t vertex_count) : degree_(vertex_count, 0) {}

  std::uint32_t degree(VertexId v) const { return degree_[v]; }
  std::span<const std::uint32_t> degrees() const { return degree_; }
  std::uint32_t max_degree() const { return max_degree_; }
  std::span<const EdgeRecord> edges() const { return edges_; }
  const EdgeRecord& edge(EdgeId e) const { return edges_[e]; }

 private:
  friend class Replay;

  std::vector<std::uint32_t> degree_;
  std::uint32_t max_degree_ = 0;
  std::vector<EdgeRecord> edges_;
};

struct ArrivalStep {
  std::size_t arrival_index;
  VertexId vertex;
  /// Ids of the edges revealed by this arrival, in processing order.
  std::span<const EdgeId> edges;
  /// Live view; reflects this arrival's edges (including the new vertex's
  /// full degree) and stays valid until the next advance.
  const GraphView* view;
};

/// Replays an instance arrival by arrival. The instance must outlive the
/// replay and must pass validate_instance.
class Replay {
 public:
  explicit Replay(const OnlineInstance& inst) : inst_(&inst), view_(inst.vertex_count()) {
    view_.edges_.reserve(inst.edge_count());
  }

  bool done() const { return next_ >= inst_->arrivals.size(); }
  const GraphView& view() const { return view_; }

  ArrivalStep advance() {
    const std::size_t i = next_++;
    const VertexId v = inst_->arrival_vertex(i);
    step_edges_.clear();
    for (const auto& nb : inst_->arrivals[i].neighbors) {
      const auto e = static_cast<EdgeId>(view_.edges_.size());
      view_.edges_.push_back({nb.vertex, v, nb.multiplicity, static_cast<std::uint32_t>(i)});
      view_.degree_[nb.vertex] += nb.multiplicity;
      view_.degree_[v] += nb.multiplicity;
      view_.max_degree_ = std::max(view_.max_degree_, view_.degree_[nb.vertex]);
      step_edges_.push_back(e);
    }
    view_.max_degree_ = std::max(view_.max_degree_, view_.degree_[v]);
    return {i, v, step_edges_, &view_};
  }

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = ArrivalStep;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    explicit iterator(Replay* r) : replay_(r) { fetch(); }

    const ArrivalStep& operator*() const { return current_; }
    const ArrivalStep* operator->() const { return &current_; }
    iterator& operator++() {
      fetch();
      return *this;
    }
    void operator++(int) { fetch(); }
    friend bool operator==(const iterator& it, std::default_sentinel_t) { return it.replay_ == nullptr; }

   private:
    void fetch() {
      if (replay_ == nullptr || replay_->done()) {
        replay_ = nullptr;
        return;
      }
      current_ = replay_->advance();
    }

    Replay* replay_ = nullptr;
    ArrivalStep current_{};
  };

  iterator begin() { return iterator(this); }
  std::default_sentinel_t end() { return {}; }

 private:
  const OnlineInstance* inst_;
  GraphView view_;
  std::size_t next_ = 0;
  std::vector<EdgeId> step_edges_;
};

// ---------------------------------------------------------------------------
// Multigraphs

struct MergedInstance {
  OnlineInstance simple;
  /// Multiplicity of each merged edge, indexed by EdgeId.
  std::vector<std::uint32_t> weight;
};

/// Folds multiplicities into a side table; the returned instance is simple.
inline MergedInstance merge_parallel_edges(const OnlineInstance& inst) {
  MergedInstance out{inst, {}};
  out.weight.reserve(inst.edge_count());
  for (auto& a : out.simple.arrivals)
    for (auto& nb : a.neighbors) {
      out.weight.push_back(nb.multiplicity);
      nb.multiplicity = 1;
    }
  if (out.simple.declared_max_degree) out.simple.declared_max_degree = max_degree(out.simple);
  return out;
}

/// Replaces every edge by `copies` parallel edges.
inline OnlineInstance duplicate_edges(const OnlineInstance& inst, std::uint32_t copies) {
  if (copies == 0) throw std::invalid_argument("duplicate_edges: copies must be positive");
  OnlineInstance out = inst;
  for (auto& a : out.arrivals)
    for (auto& nb : a.neighbors) nb.multiplicity *= copies;
  if (out.declared_max_degree) *out.declared_max_degree *= copies;
  return out;
}

}  // namespace edgecolor
