#include <gtest/gtest.h>

#include "edgecolor/coloring.hpp"
#include "edgecolor/generators.hpp"

using namespace edgecolor;

namespace {

// n offline and n online vertices; online j is adjacent to offline
// (j + c) mod n for c < delta, and that edge gets color c.
std::pair<OnlineInstance, IntegralColoring> cyclic_regular(unsigned n, unsigned delta) {
  OnlineInstance inst;
  inst.offline_count = n;
  inst.declared_max_degree = delta;
  for (unsigned j = 0; j < n; ++j) {
    ArrivalEvent a;
    for (unsigned c = 0; c < delta; ++c) a.neighbors.push_back({(j + c) % n, 1});
    inst.arrivals.push_back(a);
  }
  IntegralColoring coloring(inst);
  for (EdgeId e = 0; e < coloring.edge_count(); ++e) coloring.assign(e, {ColorKind::phase, e % delta});
  return {inst, coloring};
}

}  // namespace

TEST(Matching, RejectsSharedEndpoints) {
  Matching m;
  EXPECT_TRUE(m.insert(0, 1, 2));
  EXPECT_FALSE(m.insert(1, 2, 3));
  EXPECT_TRUE(m.insert(2, 3, 4));
  EXPECT_EQ(m.size(), 2u);
}

TEST(ValidateColoring, ProperAndTampered) {
  auto [inst, coloring] = cyclic_regular(6, 3);
  EXPECT_FALSE(validate_coloring(coloring, inst).has_value());
  // Edges 0 and 1 share online vertex 6.
  coloring.overwrite(1, 0, {ColorKind::phase, 0});
  const auto v = validate_coloring(coloring, inst);
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->kind, ColoringViolation::Kind::conflict);
  EXPECT_EQ(v->message.find("vertex"), 0u);
}

TEST(ValidateColoring, UncoloredAndMismatch) {
  const auto inst = gen_star(3);
  IntegralColoring coloring(inst);
  EXPECT_EQ(validate_coloring(coloring, inst)->kind, ColoringViolation::Kind::uncolored);
  EXPECT_EQ(validate_coloring(coloring, gen_star(4))->kind, ColoringViolation::Kind::instance_mismatch);
}

TEST(ValidateColoring, PhaseAndGreedyRangesAreDistinct) {
  const auto inst = gen_star(2);
  IntegralColoring coloring(inst);
  coloring.assign(0, {ColorKind::phase, 0});
  coloring.assign(1, {ColorKind::greedy, 0});
  EXPECT_FALSE(validate_coloring(coloring, inst).has_value());
}

TEST(Greedy, FirstEdgeGetsColorOne) {
  const auto run = greedy_coloring(gen_star(1));
  EXPECT_EQ(*run.coloring.copies(0)[0], (Color{ColorKind::greedy, 0}));
  EXPECT_EQ(run.colors_total, 1u);
}

TEST(Greedy, StarUsesDeltaColors) { EXPECT_EQ(greedy_coloring(gen_star(5)).colors_total, 5u); }

TEST(Greedy, NeverAboveTwiceDeltaMinusOne) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto inst = s % 2 ? gen_random_bipartite(8, 20, 0.3, 3, s) : gen_random_general(3, 25, 0.25, s);
    if (inst.edge_count() == 0) continue;
    const auto run = greedy_coloring(inst);
    EXPECT_FALSE(validate_coloring(run.coloring, inst).has_value());
    EXPECT_LE(run.colors_total, 2 * max_degree(inst) - 1);
  }
}

TEST(RepeatedMaximal, SingleEdge) { EXPECT_EQ(repeated_maximal_baseline(gen_star(1)).colors_total, 1u); }

TEST(RepeatedMaximal, StarsPlusCenterNeedsTwiceDeltaMinusOne) {
  for (unsigned delta : {1u, 2u, 3u, 10u, 50u}) {
    const auto inst = gen_stars_plus_center(delta);
    const auto run = repeated_maximal_baseline(inst);
    EXPECT_FALSE(validate_coloring(run.coloring, inst).has_value());
    EXPECT_EQ(run.colors_total, 2 * delta - 1);
  }
}

TEST(RepeatedMaximal, RandomRegularWithinBounds) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto inst = gen_random_regular(50, 8, s);
    const auto run = repeated_maximal_baseline(inst);
    EXPECT_FALSE(validate_coloring(run.coloring, inst).has_value());
    EXPECT_GE(run.colors_total, 8u);
    EXPECT_LE(run.colors_total, 15u);
  }
  EXPECT_THROW(repeated_maximal_baseline(gen_wf_tree(2)), std::invalid_argument);
}

TEST(Reduction, ColorClassesOfRegularGraphArePerfect) {
  auto [inst, coloring] = cyclic_regular(12, 5);
  ASSERT_FALSE(validate_coloring(coloring, inst).has_value());
  EXPECT_DOUBLE_EQ(mean_class_size(coloring), 12.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) EXPECT_EQ(color_class_to_matching(coloring, seed).matching.size(), 12u);
}
