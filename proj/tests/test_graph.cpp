#include <gtest/gtest.h>

#include "edgecolor/generators.hpp"
#include "edgecolor/graph.hpp"

using namespace edgecolor;

namespace {

OnlineInstance single_edge() {
  OnlineInstance inst;
  inst.offline_count = 1;
  inst.arrivals.push_back({{{0, 1}}});
  return inst;
}

OnlineInstance path_of_two() {
  OnlineInstance inst;
  inst.kind = InstanceKind::general;
  inst.offline_count = 1;
  inst.arrivals.push_back({{{0, 1}}});
  inst.arrivals.push_back({{{1, 1}}});
  return inst;
}

}  // namespace

TEST(Replay, SingleEdge) {
  const auto inst = single_edge();
  Replay replay(inst);
  int steps = 0;
  for (const auto& step : replay) {
    ++steps;
    EXPECT_EQ(step.vertex, 1u);
    ASSERT_EQ(step.edges.size(), 1u);
    EXPECT_EQ(step.edges[0], 0u);
  }
  EXPECT_EQ(steps, 1);
  EXPECT_EQ(replay.view().max_degree(), 1u);
}

TEST(Replay, HardInstanceDegreesPerPhase) {
  const auto inst = gen_bipartite_hard(3);
  const auto layout = bipartite_hard_layout(3);
  Replay replay(inst);
  for (std::size_t k = 0; k < layout.size(); ++k) {
    for (std::size_t i = 0; i < layout[k]; ++i) replay.advance();
    for (VertexId u = 0; u < inst.offline_count; ++u) EXPECT_EQ(replay.view().degree(u), k + 1);
    EXPECT_EQ(replay.view().max_degree(), k + 1);
  }
  EXPECT_TRUE(replay.done());
}

TEST(Replay, DeterministicEdgeIds) {
  const auto inst = gen_random_bipartite(8, 10, 0.4, 3, 11);
  auto collect = [&] {
    std::vector<std::pair<EdgeId, VertexId>> ids;
    Replay replay(inst);
    for (const auto& step : replay)
      for (EdgeId e : step.edges) ids.emplace_back(e, step.view->edge(e).earlier);
    return ids;
  };
  EXPECT_EQ(collect(), collect());
}

TEST(Replay, DegreeSumAndMonotoneDelta) {
  const auto inst = gen_random_bipartite(10, 12, 0.3, 4, 5);
  Replay replay(inst);
  std::uint32_t last_delta = 0;
  std::uint64_t copies = 0;
  for (const auto& step : replay) {
    for (EdgeId e : step.edges) copies += step.view->edge(e).multiplicity;
    std::uint64_t sum = 0;
    std::uint32_t mx = 0;
    for (auto d : step.view->degrees()) {
      sum += d;
      mx = std::max(mx, d);
    }
    EXPECT_EQ(sum, 2 * copies);
    EXPECT_EQ(step.view->max_degree(), mx);
    EXPECT_GE(step.view->max_degree(), last_delta);
    last_delta = step.view->max_degree();
  }
}

TEST(Validate, GeneratorOutputIsValid) {
  EXPECT_FALSE(validate_instance(gen_bipartite_hard(3)).has_value());
}

TEST(Validate, ForwardReference) {
  auto inst = single_edge();
  inst.arrivals.push_back({{{3, 1}}});
  const auto v = validate_instance(inst);
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->kind, ViolationKind::bad_neighbor_reference);
  EXPECT_EQ(v->arrival_index, 1u);
}

TEST(Validate, WrongDeclaredDegree) {
  auto inst = path_of_two();
  inst.declared_max_degree = 5;
  const auto v = validate_instance(inst);
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->kind, ViolationKind::wrong_declared_degree);
  inst.declared_max_degree = 2;
  EXPECT_FALSE(validate_instance(inst).has_value());
}

TEST(Validate, BipartiteViolation) {
  auto inst = path_of_two();
  inst.kind = InstanceKind::bipartite_one_sided;
  const auto v = validate_instance(inst);
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->kind, ViolationKind::bipartite_violation);
  EXPECT_EQ(v->arrival_index, 1u);
}

TEST(Validate, ZeroMultiplicityAndDuplicates) {
  OnlineInstance inst;
  inst.offline_count = 2;
  inst.arrivals.push_back({{{0, 0}}});
  EXPECT_EQ(validate_instance(inst)->kind, ViolationKind::zero_multiplicity);
  inst.arrivals[0] = {{{0, 1}, {1, 1}, {0, 2}}};
  EXPECT_EQ(validate_instance(inst)->kind, ViolationKind::duplicate_neighbor);
}

TEST(Merge, SimpleInstanceIsIdentity) {
  const auto inst = gen_bipartite_hard(3);
  const auto merged = merge_parallel_edges(inst);
  EXPECT_EQ(merged.simple, inst);
  EXPECT_EQ(merged.weight, std::vector<std::uint32_t>(inst.edge_count(), 1));
}

TEST(Merge, SingleEdgeWeightFour) {
  auto inst = single_edge();
  inst.arrivals[0].neighbors[0].multiplicity = 4;
  const auto merged = merge_parallel_edges(inst);
  EXPECT_EQ(merged.simple.arrivals[0].neighbors[0].multiplicity, 1u);
  EXPECT_EQ(merged.weight, std::vector<std::uint32_t>{4});
}

TEST(Merge, DuplicatedTwoRegularGraph) {
  // 4-cycle u0 v0 u1 v1 as a one-sided instance.
  OnlineInstance cycle;
  cycle.offline_count = 2;
  cycle.arrivals.push_back({{{0, 1}, {1, 1}}});
  cycle.arrivals.push_back({{{0, 1}, {1, 1}}});
  cycle.declared_max_degree = 2;
  const auto multi = duplicate_edges(cycle, 3);
  EXPECT_EQ(*multi.declared_max_degree, 6u);
  EXPECT_FALSE(validate_instance(multi).has_value());
  const auto merged = merge_parallel_edges(multi);
  EXPECT_EQ(merged.simple, cycle);
  EXPECT_EQ(merged.weight, std::vector<std::uint32_t>(4, 3));

  std::uint64_t weighted = 0;
  for (auto w : merged.weight) weighted += 2 * w;
  std::uint64_t degree_total = 0;
  for (auto d : final_degrees(multi)) degree_total += d;
  EXPECT_EQ(weighted, degree_total);
}
