#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "edgecolor/fractional.hpp"
#include "edgecolor/generators.hpp"
#include "edgecolor/lower_bound.hpp"

using namespace edgecolor;

TEST(DualCertificate, SmallestCase) {
  const auto cert = eval_dual_certificate(3);
  EXPECT_EQ(cert.c, 1u);
  EXPECT_EQ(cert.harmonic_gap, mpq_class(11, 6) - 1);
  EXPECT_EQ(cert.t, mpq_class(6, 19));
  EXPECT_EQ(cert.value, mpq_class(18, 19));
  EXPECT_EQ(alpha_column_sum(cert), 1 - cert.t);
  EXPECT_FALSE(verify_dual_feasibility(cert).has_value());
  EXPECT_THROW(eval_dual_certificate(2), std::invalid_argument);
}

TEST(DualCertificate, CutoffIsFloorOfMOverE) {
  EXPECT_EQ(certificate_cutoff(3), 1u);
  EXPECT_EQ(certificate_cutoff(5), 1u);
  EXPECT_EQ(certificate_cutoff(6), 2u);
  EXPECT_EQ(certificate_cutoff(100), 36u);
  EXPECT_EQ(certificate_cutoff(1000000), 367879u);
}

TEST(DualCertificate, TermwiseSumMatchesClosedForm) {
  for (std::uint64_t m = 3; m <= 120; ++m) {
    const auto cert = eval_dual_certificate(m);
    EXPECT_EQ(alpha_column_sum_termwise(cert), alpha_column_sum(cert)) << m;
    // Every x_kj reduced cost, straight from the entries.
    for (std::uint64_t k = 1; k <= m; ++k)
      for (std::uint64_t j = 1; j <= k; ++j) ASSERT_LE(cert.y(k) - k * cert.z(k, j) - cert.w(j), 0) << m;
  }
}

TEST(DualCertificate, SweepMatchesDirectEvaluation) {
  std::uint64_t checked = 0;
  for_each_dual_certificate(3, 400, [&](const DualCertificate& cert) {
    EXPECT_FALSE(verify_dual_feasibility(cert).has_value()) << cert.m;
    if (cert.m % 37 == 0) {
      const auto direct = eval_dual_certificate(cert.m);
      EXPECT_EQ(direct.t, cert.t);
      EXPECT_EQ(direct.value, cert.value);
    }
    ++checked;
  });
  EXPECT_EQ(checked, 398u);
}

TEST(DualCertificate, VerifierCatchesTampering) {
  auto cert = eval_dual_certificate(10);
  auto bad = cert;
  bad.c += 1;
  EXPECT_EQ(verify_dual_feasibility(bad)->constraint, "c");
  bad = cert;
  bad.t = -bad.t;
  EXPECT_EQ(verify_dual_feasibility(bad)->constraint, "t");
  bad = cert;
  bad.t *= 2;
  bad.value *= 2;
  EXPECT_EQ(verify_dual_feasibility(bad)->constraint, "alpha");
  bad = cert;
  bad.value += mpq_class(1, 1000);
  EXPECT_EQ(verify_dual_feasibility(bad)->constraint, "value");
}

TEST(DualCertificate, ExtendedPrecisionValue) {
  for (std::uint64_t m : {3u, 50u, 1000u})
    EXPECT_NEAR(static_cast<double>(dual_certificate_value(m)), eval_dual_certificate(m).value.get_d(), 1e-15);
  const double limit = std::numbers::e / (std::numbers::e - 1);
  EXPECT_NEAR(static_cast<double>(dual_certificate_value(1000000)), 1.5819767, 1e-5);
  EXPECT_NEAR(static_cast<double>(dual_certificate_value(1000000)), limit, 1e-5);
}

TEST(DualCertificate, ApproachesLimitFromBelow) {
  const long double limit = std::numbers::e_v<long double> / (std::numbers::e_v<long double> - 1);
  long double prev = 0;
  for (std::uint64_t m = 10; m <= 3000; ++m) {
    const long double v = dual_certificate_value(m);
    EXPECT_LT(v, limit);
    // Not strictly monotone step by step (c jumps); the gap to the limit
    // shrinks like 1/m (about 3.3/m here).
    EXPECT_LT(limit - v, 4.0L / m);
    prev = v;
  }
  EXPECT_GT(prev, dual_certificate_value(10));
}

TEST(WeakDuality, BipartiteLpAboveCertificate) {
  Real prev = 0;
  for (std::uint32_t m = 3; m <= 12; ++m) {
    const auto s = solve_lp(build_bipartite_lp(m));
    ASSERT_EQ(s.status, LpStatus::optimal);
    EXPECT_GE(s.value, static_cast<Real>(eval_dual_certificate(m).value.get_d()) - 1e-7L) << m;
    EXPECT_GE(s.value, prev - 1e-9L) << m;
    EXPECT_LT(s.value, std::numbers::e_v<long double> / (std::numbers::e_v<long double> - 1));
    prev = s.value;
  }
}

TEST(Bridge, WaterFillingNeverBeatsTheLp) {
  const double beta = std::numbers::e / (std::numbers::e - 1);
  for (unsigned m = 1; m <= 6; ++m) {
    double worst = 0;
    for (unsigned k = 1; k <= m; ++k)
      worst = std::max(worst, competitive_ratio(bounded_water_filling(gen_bipartite_hard(m, k), beta)));
    EXPECT_GE(worst, static_cast<double>(solve_lp(build_bipartite_lp(m)).value) - 1e-6) << m;
  }
}
