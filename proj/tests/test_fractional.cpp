#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

#include "edgecolor/fractional.hpp"
#include "edgecolor/generators.hpp"

using namespace edgecolor;

namespace {

const double kEOverEMinus1 = std::numbers::e / (std::numbers::e - 1.0);

std::vector<double> dense(std::span<const ColorValue> values, std::size_t n) {
  std::vector<double> out(n, 0.0);
  for (const auto& cv : values) out.at(cv.color) += cv.value;
  return out;
}

void expect_near_vec(const std::vector<double>& got, const std::vector<double>& want, double tol = 1e-12) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "index " << i;
}

std::vector<double> loads_of(const FractionalColoring& fc, VertexId v, std::size_t n) {
  std::vector<double> out(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) out[c] = fc.load(v, static_cast<std::uint32_t>(c));
  return out;
}

}  // namespace

TEST(Trivial, SingleEdge) {
  const auto fc = trivial_known_delta(gen_star(1), 1);
  expect_near_vec(dense(fc.values(0), 1), {1.0});
}

TEST(Trivial, StarCenterLoadsOne) {
  const auto fc = trivial_known_delta(gen_star(4), 4);
  expect_near_vec(loads_of(fc, 0, 4), {1, 1, 1, 1});
  EXPECT_THROW(trivial_known_delta(gen_star(4), 3), std::invalid_argument);
}

TEST(Trivial, RegularInstanceIsOneCompetitive) {
  const auto fc = trivial_known_delta(gen_random_regular(30, 6, 2), 6);
  EXPECT_NEAR(competitive_ratio(fc), 1.0, 1e-12);
  EXPECT_FALSE(check_fractional_invariants(fc).has_value());
}

TEST(BoundedWaterFilling, HandTracedStar) {
  const auto fc = bounded_water_filling(gen_star(3), 1.5);
  expect_near_vec(dense(fc.values(0), 3), {1, 0, 0});
  expect_near_vec(dense(fc.values(1), 3), {0.25, 0.75, 0});
  expect_near_vec(dense(fc.values(2), 3), {0, 0.5, 0.5});
  expect_near_vec(loads_of(fc, 0, 3), {1.25, 1.25, 0.5});
}

TEST(BoundedWaterFilling, UniformSplitWhenLoadsEqual) {
  // K_{4,4}: the first arrival sees delta = 4 and all-zero loads.
  OnlineInstance inst;
  inst.offline_count = 4;
  for (int i = 0; i < 4; ++i) inst.arrivals.push_back({{{0, 1}, {1, 1}, {2, 1}, {3, 1}}});
  const auto fc = bounded_water_filling(inst, 1.5);
  for (EdgeId e = 0; e < 4; ++e) expect_near_vec(dense(fc.values(e), 4), {0.25, 0.25, 0.25, 0.25});
  EXPECT_NEAR(competitive_ratio(fc), 1.0, 1e-12);
}

TEST(BoundedWaterFilling, HardInstanceSixWithinOptimalBound) {
  const auto fc = bounded_water_filling(gen_bipartite_hard(6), kEOverEMinus1);
  EXPECT_LE(competitive_ratio(fc), kEOverEMinus1 + 1e-9);
  EXPECT_FALSE(check_fractional_invariants(fc).has_value());
}

TEST(BoundedWaterFilling, CapRespected) {
  const double beta = 1.3;
  const auto inst = gen_random_bipartite(12, 30, 0.4, 3, 17);
  const auto fc = bounded_water_filling(inst, beta);
  for (EdgeId e = 0; e < fc.edge_count(); ++e) {
    const double cap = fc.edge(e).multiplicity * beta / fc.delta_at_assignment(e);
    for (const auto& cv : fc.values(e)) {
      EXPECT_LE(cv.value, cap + 1e-12);
      EXPECT_LT(cv.color, fc.delta_at_assignment(e));
    }
  }
}

TEST(BoundedWaterFilling, EpsilonBound) {
  const auto fc = bounded_water_filling(gen_bipartite_hard(4), 1.5, 0.1);
  for (EdgeId e = 0; e < fc.edge_count(); ++e) {
    EXPECT_GE(fc.delta_at_assignment(e), 15u);
    for (const auto& cv : fc.values(e)) EXPECT_LE(cv.value, 0.1 + 1e-12);
  }
  EXPECT_FALSE(check_fractional_invariants(fc).has_value());
}

TEST(BoundedWaterFilling, RejectsBadBeta) {
  EXPECT_THROW(bounded_water_filling(gen_star(2), 2.0), std::invalid_argument);
  EXPECT_THROW(bounded_water_filling(gen_star(2), 1.0), std::invalid_argument);
}

TEST(BoundedWaterFilling, InvariantsOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto bip = gen_random_bipartite(10, 25, 0.35, 3, seed);
    const auto gen = gen_random_general(4, 30, 0.2, seed);
    for (const auto* inst : {&bip, &gen}) {
      for (auto algo : {FractionalAlgo::bounded, FractionalAlgo::unbounded}) {
        const auto run = run_fractional(*inst, algo, WaterFillConfig{.beta = 1.4}, true, true);
        EXPECT_FALSE(check_fractional_invariants(run.coloring).has_value()) << seed;
        if (algo == FractionalAlgo::bounded) {
          EXPECT_FALSE(check_order_monotonicity(run.trace).has_value()) << seed;
        }
      }
    }
  }
}

TEST(BoundedWaterFilling, OrderMonotonicityOnStructuredInstances) {
  for (const auto& inst : {gen_bipartite_hard(5), gen_general_adversary(5, 3), gen_wf_tree(5),
                           gen_bounded_wf_tight(12, 2), gen_dense_blowup(gen_bipartite_hard(4), 2)}) {
    for (double beta : {1.1, 1.586, 1.9}) {
      const auto run = run_fractional(inst, FractionalAlgo::bounded, WaterFillConfig{.beta = beta}, false, true);
      ASSERT_FALSE(run.trace.empty());
      const auto v = check_order_monotonicity(run.trace);
      EXPECT_FALSE(v.has_value()) << *v;
    }
  }
}

TEST(BoundedWaterFilling, BoundConformance) {
  std::vector<OnlineInstance> bip{gen_bipartite_hard(5), gen_bipartite_hard(6, 4),
                                  gen_dense_blowup(gen_bipartite_hard(4), 3), gen_stars_plus_center(12),
                                  gen_random_regular(60, 9, 4), gen_star(10)};
  for (std::uint64_t s = 0; s < 10; ++s) bip.push_back(gen_random_bipartite(15, 40, 0.3, 2, s));
  std::vector<OnlineInstance> gen{gen_wf_tree(5), gen_general_adversary(6, 2), gen_general_adversary(6, 4),
                                  gen_bounded_wf_tight(16, 2)};
  for (std::uint64_t s = 0; s < 10; ++s) gen.push_back(gen_random_general(5, 40, 0.15, s));
  for (double beta : {1.1, 1.3, kEOverEMinus1, 1.9}) {
    for (const auto& inst : bip)
      EXPECT_LE(competitive_ratio(bounded_water_filling(inst, beta)),
                theoretical_bound(beta, InstanceKind::bipartite_one_sided) + 1e-6);
    for (const auto& inst : gen)
      EXPECT_LE(competitive_ratio(bounded_water_filling(inst, beta)),
                theoretical_bound(beta, InstanceKind::general) + 1e-6);
  }
}

TEST(UnboundedWaterFilling, SingleEdge) {
  const auto fc = unbounded_water_filling(gen_star(1));
  expect_near_vec(dense(fc.values(0), 1), {1.0});
}

TEST(UnboundedWaterFilling, TreeLevelLoadsMatchClosedForm) {
  const unsigned n = 6;
  const auto inst = gen_wf_tree(n);
  const auto sizes = wf_tree_level_sizes(n);
  FractionalEngine engine(inst.vertex_count(), FractionalAlgo::unbounded, {});
  std::size_t arrival = 0;
  for (int level = static_cast<int>(n) - 1; level >= 0; --level) {
    const unsigned d = n - level;  // children of a vertex at this level
    std::vector<double> want(d);
    for (unsigned i = 0; i < d; ++i) {
      if (d % 2 == 1)
        want[i] = i < (d + 1) / 2 ? 2.0 * d / (d + 1) : 0.0;
      else
        want[i] = i < d / 2 ? (2.0 * d - 1) / d : 1.0 / d;
    }
    for (std::size_t i = 0; i < sizes[level]; ++i, ++arrival) {
      const VertexId v = inst.arrival_vertex(arrival);
      engine.arrive(v, inst.arrivals[arrival].neighbors);
      auto got = std::vector<double>(engine.coloring().loads(v).begin(), engine.coloring().loads(v).end());
      got.resize(std::max<std::size_t>(got.size(), d), 0.0);
      std::sort(got.rbegin(), got.rend());
      for (std::size_t j = d; j < got.size(); ++j) EXPECT_NEAR(got[j], 0.0, 1e-9);
      got.resize(d);
      expect_near_vec(got, want, 1e-6);
    }
  }
  EXPECT_GE(engine.coloring().max_load(), 1.8);
}

TEST(UnboundedWaterFilling, NeverAboveTwo) {
  for (std::uint64_t s = 0; s < 15; ++s) {
    EXPECT_LE(competitive_ratio(unbounded_water_filling(gen_random_general(4, 40, 0.25, s))), 2.0 + 1e-9);
    EXPECT_LE(competitive_ratio(unbounded_water_filling(gen_random_bipartite(8, 40, 0.4, 3, s))), 2.0 + 1e-9);
  }
  for (unsigned n = 1; n <= 7; ++n) EXPECT_LE(competitive_ratio(unbounded_water_filling(gen_wf_tree(n))), 2.0 + 1e-9);
}

TEST(Stretch, IdentityForAlphaOne) {
  const auto fc = bounded_water_filling(gen_star(3), 1.5);
  const auto uniform = trivial_known_delta(gen_star(3), 3);
  const auto s = stretch_to_feasible(uniform, 1.0);
  for (EdgeId e = 0; e < s.edge_count(); ++e) {
    const auto a = s.values(e);
    const auto b = uniform.values(e);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].color, b[i].color);
      EXPECT_DOUBLE_EQ(a[i].value, b[i].value);
    }
  }
  EXPECT_EQ(s.colors_used(), 3u);
  EXPECT_THROW(stretch_to_feasible(fc, 1.0), std::invalid_argument);
}

TEST(Stretch, LoadOneAndAHalfOverTwoColors) {
  // Two offline vertices u0,u1; fractional values chosen so u0 carries 1.5
  // on both colors.
  FractionalColoring fc(5, true);
  for (VertexId v = 2; v < 5; ++v) {
    const EdgeId e = fc.add_edge({0, v, 1, v - 2}, 2);
    fc.assign(e, 0, 0.5);
    fc.assign(e, 1, 0.5);
  }
  EXPECT_NEAR(fc.max_load(), 1.5, 1e-12);
  const auto s = stretch_to_feasible(fc, 1.5);
  EXPECT_EQ(s.colors_used(), 3u);
  EXPECT_EQ(stretched_color_count(2, 1.5), 3u);
  EXPECT_LE(s.max_load(), 1.0 + 1e-12);
  EXPECT_FALSE(check_fractional_invariants(s).has_value());
}

TEST(Stretch, WaterFillingOutputBecomesFeasible) {
  for (const auto& inst : {gen_bipartite_hard(6), gen_random_regular(40, 12, 1)}) {
    const auto fc = bounded_water_filling(inst, kEOverEMinus1);
    const double alpha = theoretical_bound(kEOverEMinus1, InstanceKind::bipartite_one_sided);
    const auto s = stretch_to_feasible(fc, alpha);
    EXPECT_LE(s.max_load(), 1.0 + 1e-9);
    EXPECT_LE(s.colors_used(), stretched_color_count(fc.colors_used(), alpha));
    EXPECT_FALSE(check_fractional_invariants(s).has_value());
  }
}

TEST(Bounds, KnownValues) {
  EXPECT_NEAR(theoretical_bound(kEOverEMinus1, InstanceKind::bipartite_one_sided), 1.581977, 1e-6);
  EXPECT_NEAR(theoretical_bound(1.586, InstanceKind::general), 1.777, 5e-4);
  EXPECT_THROW(theoretical_bound(2.0, InstanceKind::general), std::invalid_argument);
}

TEST(Bounds, GeneralBoundDominates) {
  Rng rng(42);
  for (int i = 0; i < 1000; ++i) {
    const double beta = 1.001 + 0.998 * rng.uniform();
    const double general = theoretical_bound(beta, InstanceKind::general);
    EXPECT_LE(beta, general + 1e-12);
    EXPECT_LE(beta * std::log(beta / (beta - 1.0)), general + 1e-12);
  }
}

TEST(Trace, CsvExport) {
  const auto run = run_fractional(gen_star(2), FractionalAlgo::bounded, WaterFillConfig{.beta = 1.5}, true, true);
  std::ostringstream os;
  write_trace_csv(os, run.trace);
  EXPECT_EQ(os.str(), "step,vertex,color_rank,load\n1,0,1,1\n2,0,1,1.25\n2,0,2,0.75\n");
}
