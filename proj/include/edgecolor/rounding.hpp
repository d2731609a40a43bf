#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "edgecolor/graph.hpp"

namespace edgecolor {

/// An edge offered to the rounder by the arriving vertex.
struct Candidate {
  VertexId vertex;
  double x;
};

/// Per-vertex free probabilities and matched flags of one online matching
/// rounder. q_u is exactly Pr[u unmatched] over the rounder's randomness.
class RounderState {
 public:
  RounderState() = default;
  explicit RounderState(std::size_t vertex_count) : q_(vertex_count, 1.0), matched_(vertex_count, 0) {}

  double free_probability(VertexId u) const { return q_[u]; }
  bool is_matched(VertexId u) const { return matched_[u] != 0; }
  std::size_t vertex_count() const { return q_.size(); }

 private:
  friend class ProposalRounder;
  std::vector<double> q_;
  std::vector<char> matched_;
};

/// Free-probability-compensated proposal rounder. The arriving vertex
/// proposes to at most one candidate u with probability y_u = x_u / q_u,
/// scaled down uniformly if the y's sum above 1; the proposal succeeds iff u
/// is still free. Then Pr[(u,v) matched] = y_u q_u, which equals x_u whenever
/// no scaling happened and never exceeds it.
class ProposalRounder {
 public:
  ProposalRounder() = default;
  explicit ProposalRounder(std::size_t vertex_count) : state_(vertex_count) {}

  /// `uniform` is a draw from [0,1). Returns the index of the matched
  /// candidate, if any.
  std::optional<std::size_t> step(std::span<const Candidate> cands, double uniform) {
    double sum_x = 0.0, sum_y = 0.0;
    y_.resize(cands.size());
    for (std::size_t i = 0; i < cands.size(); ++i) {
      const auto& c = cands[i];
      if (c.x < 0.0) throw std::invalid_argument("negative fractional value");
      sum_x += c.x;
      const double q = state_.q_[c.vertex];
      y_[i] = q > 0.0 ? c.x / q : 0.0;
      sum_y += y_[i];
    }
    if (sum_x > 1.0 + 1e-9)
      throw std::invalid_argument("fractional values of one arrival sum to " + std::to_string(sum_x) + " > 1");
    scaled_ = sum_y > 1.0;
    if (scaled_)
      for (double& y : y_) y /= sum_y;

    std::optional<std::size_t> target;
    double acc = 0.0;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      acc += y_[i];
      if (!target && uniform < acc && y_[i] > 0.0) target = i;
    }
    for (std::size_t i = 0; i < cands.size(); ++i) state_.q_[cands[i].vertex] *= 1.0 - y_[i];

    if (!target || state_.matched_[cands[*target].vertex]) return std::nullopt;
    state_.matched_[cands[*target].vertex] = 1;
    return target;
  }

  /// Proposal probabilities of the latest step.
  std::span<const double> last_proposals() const { return y_; }
  bool last_step_scaled() const { return scaled_; }
  const RounderState& state() const { return state_; }

 private:
  RounderState state_;
  std::vector<double> y_;
  bool scaled_ = false;
};

/// MARKING_d contract: every offered edge gets x = multiplicity / d.
/// Requires the arriving vertex's degree on the offered edges to be <= d.
inline std::optional<std::size_t> marking_d(ProposalRounder& rounder, std::span<const Neighbor> edges,
                                            std::uint32_t d, double uniform) {
  if (d == 0) throw std::invalid_argument("marking: d must be positive");
  std::vector<Candidate> cands;
  cands.reserve(edges.size());
  std::uint64_t degree = 0;
  for (const auto& e : edges) {
    degree += e.multiplicity;
    cands.push_back({e.vertex, static_cast<double>(e.multiplicity) / d});
  }
  if (degree > d)
    throw std::invalid_argument("marking: degree " + std::to_string(degree) + " exceeds d = " + std::to_string(d));
  return rounder.step(cands, uniform);
}

}  // namespace edgecolor
