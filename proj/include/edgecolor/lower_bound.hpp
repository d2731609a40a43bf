#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "edgecolor/fractional.hpp"
#include "edgecolor/generators.hpp"
#include "edgecolor/lp.hpp"

namespace edgecolor {

inline std::string lp_x_name(std::uint32_t k, std::uint32_t j) {
  return "x_" + std::to_string(k) + "_" + std::to_string(j);
}
inline std::string lp_y_name(std::uint32_t t, std::uint32_t k, std::uint32_t j) {
  return "y_" + std::to_string(t) + "_" + std::to_string(k) + "_" + std::to_string(j);
}

/// Averaged-assignment LP for one-sided arrivals: phase k edges (j <= k)
/// take x_kj of color j.
///   sum_{j<=k} x_kj >= 1,  k x_kj <= alpha,  sum_{k>=j} x_kj <= alpha.
inline LpProblem build_bipartite_lp(std::uint32_t m) {
  if (m < 1) throw std::invalid_argument("bipartite LP needs m >= 1");
  LpProblem lp;
  const std::size_t alpha = lp.add_var("alpha", 1);
  std::vector<std::vector<std::size_t>> x(m + 1, std::vector<std::size_t>(m + 1));
  for (std::uint32_t k = 1; k <= m; ++k)
    for (std::uint32_t j = 1; j <= k; ++j) x[k][j] = lp.add_var(lp_x_name(k, j));
  for (std::uint32_t k = 1; k <= m; ++k) {
    std::vector<LpTerm> t;
    for (std::uint32_t j = 1; j <= k; ++j) t.push_back({x[k][j], 1});
    lp.add_constraint("cover_" + std::to_string(k), std::move(t), Sense::ge, 1);
  }
  for (std::uint32_t k = 1; k <= m; ++k)
    for (std::uint32_t j = 1; j <= k; ++j)
      lp.add_constraint("edge_" + std::to_string(k) + "_" + std::to_string(j),
                        {{x[k][j], static_cast<Real>(k)}, {alpha, -1}}, Sense::le, 0);
  for (std::uint32_t j = 1; j <= m; ++j) {
    std::vector<LpTerm> t;
    for (std::uint32_t k = j; k <= m; ++k) t.push_back({x[k][j], 1});
    t.push_back({alpha, -1});
    lp.add_constraint("load_" + std::to_string(j), std::move(t), Sense::le, 0);
  }
  return lp;
}

inline constexpr std::uint32_t general_lp_max_m = 60;

/// LP for general vertex arrivals. Besides x_kj, y^t_kj is the averaged
/// assignment to phase k edges in the branch where the adversary switches
/// after phase t (t < k) and keeps hitting the phase-t vertices.
inline LpProblem build_general_lp(std::uint32_t m) {
  if (m < 2) throw std::invalid_argument("general LP needs m >= 2");
  if (m > general_lp_max_m)
    throw std::invalid_argument("general LP construction is limited to m <= " + std::to_string(general_lp_max_m));
  LpProblem lp;
  const std::size_t alpha = lp.add_var("alpha", 1);
  std::vector<std::vector<std::size_t>> x(m + 1, std::vector<std::size_t>(m + 1));
  for (std::uint32_t k = 1; k <= m; ++k)
    for (std::uint32_t j = 1; j <= k; ++j) x[k][j] = lp.add_var(lp_x_name(k, j));
  // y[t][k][j], t < k, j <= k.
  std::vector<std::vector<std::vector<std::size_t>>> y(m + 1);
  for (std::uint32_t t = 1; t < m; ++t) {
    y[t].assign(m + 1, {});
    for (std::uint32_t k = t + 1; k <= m; ++k) {
      y[t][k].assign(k + 1, 0);
      for (std::uint32_t j = 1; j <= k; ++j) y[t][k][j] = lp.add_var(lp_y_name(t, k, j));
    }
  }
  const auto tag = [](std::initializer_list<std::uint32_t> ids) {
    std::string s;
    for (auto i : ids) s += "_" + std::to_string(i);
    return s;
  };

  for (std::uint32_t k = 1; k <= m; ++k) {
    std::vector<LpTerm> t;
    for (std::uint32_t j = 1; j <= k; ++j) t.push_back({x[k][j], 1});
    lp.add_constraint("cover" + tag({k}), std::move(t), Sense::ge, 1);
  }
  for (std::uint32_t j = 1; j <= m; ++j) {
    std::vector<LpTerm> t;
    for (std::uint32_t k = j; k <= m; ++k) t.push_back({x[k][j], 1});
    t.push_back({alpha, -1});
    lp.add_constraint("load" + tag({j}), std::move(t), Sense::le, 0);
  }
  for (std::uint32_t t = 1; t < m; ++t)
    for (std::uint32_t k = t + 1; k <= m; ++k) {
      std::vector<LpTerm> terms;
      for (std::uint32_t j = 1; j <= k; ++j) terms.push_back({y[t][k][j], 1});
      lp.add_constraint("bcover" + tag({t, k}), std::move(terms), Sense::ge, 1);
    }
  // Branch after phase t: a phase-t vertex holds t x_tj of color j before
  // the switch, then collects y^t_kj from every later phase.
  for (std::uint32_t t = 1; t <= m; ++t)
    for (std::uint32_t j = 1; j <= t; ++j) {
      std::vector<LpTerm> terms{{x[t][j], static_cast<Real>(t)}};
      for (std::uint32_t k = t + 1; k <= m; ++k) terms.push_back({y[t][k][j], 1});
      terms.push_back({alpha, -1});
      lp.add_constraint("bhold" + tag({t, j}), std::move(terms), Sense::le, 0);
    }
  for (std::uint32_t t = 1; t < m; ++t)
    for (std::uint32_t j = t + 1; j <= m; ++j) {
      std::vector<LpTerm> terms;
      for (std::uint32_t k = j; k <= m; ++k) terms.push_back({y[t][k][j], 1});
      terms.push_back({alpha, -1});
      lp.add_constraint("bload" + tag({t, j}), std::move(terms), Sense::le, 0);
    }
  for (std::uint32_t t = 1; t < m; ++t)
    for (std::uint32_t k = t + 1; k <= m; ++k)
      for (std::uint32_t j = 1; j <= k; ++j)
        lp.add_constraint("bedge" + tag({t, k, j}), {{y[t][k][j], static_cast<Real>(k)}, {alpha, -1}}, Sense::le, 0);
  for (std::uint32_t k = 1; k <= m; ++k)
    for (std::uint32_t j = 1; j <= k; ++j)
      lp.add_constraint("edge" + tag({k, j}), {{x[k][j], static_cast<Real>(k)}, {alpha, -1}}, Sense::le, 0);
  return lp;
}

/// c(m) = floor(m / e), exact for the m this library handles.
inline std::uint64_t certificate_cutoff(std::uint64_t m) {
  auto c = static_cast<std::uint64_t>(std::floor(static_cast<long double>(m) / std::numbers::e_v<long double>));
  // m/e is irrational for m > 0, so a one-step correction settles rounding.
  while (static_cast<long double>(c + 1) * std::numbers::e_v<long double> <= m) ++c;
  while (c > 0 && static_cast<long double>(c) * std::numbers::e_v<long double> > m) --c;
  return c;
}

/// Feasible dual of the bipartite LP: y_k = t, w_j = t for j <= c,
/// z_kj = t/k for c < j <= k. Every entry is t times a simple rational, so
/// the certificate stores t and H_m - H_c exactly.
struct DualCertificate {
  std::uint64_t m = 0;
  std::uint64_t c = 0;
  /// H_m - H_c.
  mpq_class harmonic_gap;
  mpq_class t;
  mpq_class value;

  mpq_class y(std::uint64_t) const { return t; }
  mpq_class w(std::uint64_t j) const { return j <= c ? t : mpq_class(0); }
  mpq_class z(std::uint64_t k, std::uint64_t j) const { return j > c && j <= k ? mpq_class(t / k) : mpq_class(0); }
};

namespace detail {

inline DualCertificate finish_certificate(std::uint64_t m, std::uint64_t c, const mpq_class& gap) {
  DualCertificate cert{m, c, gap, {}, {}};
  mpq_class denom = mpq_class(m + 1) - c * gap;
  cert.t = 1 / denom;
  cert.value = mpq_class(m) * cert.t;
  cert.t.canonicalize();
  cert.value.canonicalize();
  return cert;
}

}  // namespace detail

inline mpq_class harmonic(std::uint64_t n) {
  mpq_class h = 0;
  for (std::uint64_t k = 1; k <= n; ++k) h += mpq_class(1, k);
  return h;
}

inline DualCertificate eval_dual_certificate(std::uint64_t m) {
  if (m < 3) throw std::invalid_argument("dual certificate needs m >= 3");
  const std::uint64_t c = certificate_cutoff(m);
  mpq_class gap = 0;
  for (std::uint64_t k = c + 1; k <= m; ++k) gap += mpq_class(1, k);
  return detail::finish_certificate(m, c, gap);
}

/// Calls fn(cert) for m = lo..hi, carrying H_m - H_c forward.
inline void for_each_dual_certificate(std::uint64_t lo, std::uint64_t hi,
                                      const std::function<void(const DualCertificate&)>& fn) {
  if (lo < 3) throw std::invalid_argument("dual certificate needs m >= 3");
  std::uint64_t c = certificate_cutoff(lo);
  mpq_class gap = 0;
  for (std::uint64_t k = c + 1; k <= lo; ++k) gap += mpq_class(1, k);
  for (std::uint64_t m = lo; m <= hi; ++m) {
    if (m > lo) {
      gap += mpq_class(1, m);
      for (const std::uint64_t next = certificate_cutoff(m); c < next;) gap -= mpq_class(1, ++c);
    }
    fn(detail::finish_certificate(m, c, gap));
  }
}

/// Sum over the alpha column: sum_j w_j + sum_{k,j} z_kj
/// = t (c + sum_{k>c} (k - c)/k) = t (m - c (H_m - H_c)).
inline mpq_class alpha_column_sum(const DualCertificate& cert) {
  mpq_class s = cert.t * (mpq_class(cert.m) - cert.c * cert.harmonic_gap);
  s.canonicalize();
  return s;
}

/// The same sum, term by term.
inline mpq_class alpha_column_sum_termwise(const DualCertificate& cert) {
  mpq_class s = 0;
  for (std::uint64_t j = 1; j <= cert.m; ++j) {
    s += cert.w(j);
    for (std::uint64_t k = j; k <= cert.m; ++k) s += cert.z(k, j);
  }
  return s;
}

struct DualViolation {
  std::string constraint;
  std::string message;
};

/// Re-checks the certificate: sign constraints, the x_kj family
/// y_k - k z_kj - w_j <= 0, the alpha family sum <= 1, and value = m t.
inline std::optional<DualViolation> verify_dual_feasibility(const DualCertificate& cert) {
  if (cert.m < 3) return DualViolation{"m", "m must be at least 3"};
  if (cert.c != certificate_cutoff(cert.m)) return DualViolation{"c", "c is not floor(m/e)"};
  if (cert.c < 1 || cert.c > cert.m) return DualViolation{"c", "c out of range"};
  if (sgn(cert.t) <= 0) return DualViolation{"t", "t must be positive"};
  // In units of t: y_k = 1, w_j = [j <= c], and k z_kj = [j > c] for every
  // k >= j, so the family y_k - k z_kj - w_j <= 0 depends on j only.
  for (std::uint64_t j = 1; j <= cert.m; ++j) {
    const std::uint64_t w = j <= cert.c ? 1 : 0;
    const std::uint64_t kz = j > cert.c ? 1 : 0;
    if (1 > w + kz) return DualViolation{"x_k_" + std::to_string(j), "reduced cost is positive"};
  }
  // t S <= 1 with S = m - c (H_m - H_c), compared without reducing t S.
  const mpq_class S = mpq_class(cert.m) - cert.c * cert.harmonic_gap;
  const mpz_class num = cert.t.get_num() * S.get_num();
  const mpz_class den = cert.t.get_den() * S.get_den();
  if (num > den) return DualViolation{"alpha", "alpha column sums above 1"};
  if (cert.value != mpq_class(cert.m) * cert.t) return DualViolation{"value", "value is not m t"};
  return std::nullopt;
}

/// m t in extended precision, with H_m - H_c summed directly from the
/// small terms up.
inline long double dual_certificate_value(std::uint64_t m) {
  if (m < 3) throw std::invalid_argument("dual certificate needs m >= 3");
  const std::uint64_t c = certificate_cutoff(m);
  long double diff = 0;
  for (std::uint64_t k = m; k > c; --k) diff += 1.0L / static_cast<long double>(k);
  return static_cast<long double>(m) / (static_cast<long double>(m + 1) - static_cast<long double>(c) * diff);
}

}  // namespace edgecolor
