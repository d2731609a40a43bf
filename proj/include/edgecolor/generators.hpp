#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "edgecolor/graph.hpp"
#include "edgecolor/rng.hpp"

namespace edgecolor {

namespace detail {

inline std::uint64_t factorial(unsigned m) {
  std::uint64_t f = 1;
  for (unsigned k = 2; k <= m; ++k) f *= k;
  return f;
}

inline std::uint64_t lcm_range(unsigned lo, unsigned hi) {
  std::uint64_t l = 1;
  for (unsigned k = lo; k <= hi; ++k) l = std::lcm(l, static_cast<std::uint64_t>(k));
  return l;
}

inline void check_size(std::uint64_t n, const char* what) {
  if (n > (std::uint64_t{1} << 31)) throw std::overflow_error(std::string(what) + ": instance too large");
}

inline std::vector<VertexId> range_ids(std::uint64_t first, std::uint64_t count) {
  std::vector<VertexId> ids(count);
  std::iota(ids.begin(), ids.end(), static_cast<VertexId>(first));
  return ids;
}

}  // namespace detail

/// Arrival counts per phase for the phase-structured families; the arrivals
/// of phase k follow those of phase k-1 contiguously.
using PhaseLayout = std::vector<std::size_t>;

/// Offline pool size of the hard bipartite instance: m! or, scaled, lcm(1..m).
inline std::uint64_t hard_instance_pool(unsigned m, bool scaled) {
  return scaled ? detail::lcm_range(1, m) : detail::factorial(m);
}

/// Hard one-sided bipartite instance G_m. The offline side has m! vertices
/// (lcm(1..m) when scaled). In phase k, pool/k vertices of degree k arrive;
/// the i-th is adjacent to offline vertices i, pool/k + i, ..., (k-1)pool/k + i,
/// so every offline vertex gains exactly one neighbor per phase.
inline OnlineInstance gen_bipartite_hard(unsigned m, std::optional<unsigned> truncate_at = std::nullopt,
                                         bool scaled = false) {
  if (m < 1 || m > 10) throw std::invalid_argument("bipartite-hard: m must be in [1, 10]");
  const unsigned phases = truncate_at.value_or(m);
  if (phases < 1 || phases > m) throw std::invalid_argument("bipartite-hard: truncation must be in [1, m]");
  const std::uint64_t pool = hard_instance_pool(m, scaled);

  OnlineInstance inst;
  inst.kind = InstanceKind::bipartite_one_sided;
  inst.offline_count = static_cast<std::uint32_t>(pool);
  for (unsigned k = 1; k <= phases; ++k) {
    const std::uint64_t count = pool / k;
    for (std::uint64_t i = 0; i < count; ++i) {
      ArrivalEvent a;
      a.neighbors.reserve(k);
      for (unsigned j = 0; j < k; ++j) a.neighbors.push_back({static_cast<VertexId>(j * count + i), 1});
      inst.arrivals.push_back(std::move(a));
    }
  }
  return inst;
}

inline PhaseLayout bipartite_hard_layout(unsigned m, std::optional<unsigned> truncate_at = std::nullopt,
                                         bool scaled = false) {
  const std::uint64_t pool = hard_instance_pool(m, scaled);
  PhaseLayout layout;
  for (unsigned k = 1; k <= truncate_at.value_or(m); ++k) layout.push_back(pool / k);
  return layout;
}

/// Replaces every vertex by t copies and every edge by the t x t biclique
/// between the copy groups. Copies of one arrival arrive consecutively.
inline OnlineInstance gen_dense_blowup(const OnlineInstance& base, unsigned t) {
  if (t < 1) throw std::invalid_argument("dense-blowup: t must be positive");
  if (base.kind != InstanceKind::bipartite_one_sided)
    throw std::invalid_argument("dense-blowup: base must be bipartite one-sided");
  detail::check_size(static_cast<std::uint64_t>(base.vertex_count()) * t, "dense-blowup");
  detail::check_size(static_cast<std::uint64_t>(base.edge_count()) * t * t, "dense-blowup");

  OnlineInstance out;
  out.kind = base.kind;
  out.offline_count = base.offline_count * t;
  if (base.declared_max_degree) out.declared_max_degree = *base.declared_max_degree * t;
  out.arrivals.reserve(base.arrivals.size() * t);
  for (const auto& a : base.arrivals) {
    ArrivalEvent copy;
    copy.neighbors.reserve(a.neighbors.size() * t);
    for (const auto& nb : a.neighbors)
      for (unsigned c = 0; c < t; ++c) copy.neighbors.push_back({nb.vertex * t + c, nb.multiplicity});
    for (unsigned c = 0; c < t; ++c) out.arrivals.push_back(copy);
  }
  return out;
}

namespace detail {

/// Pool size for the general adversary: every old phase k needs k | pool and
/// every new phase k > s needs k*s | pool.
inline std::uint64_t general_adversary_pool(unsigned m, std::optional<unsigned> switch_phase, bool scaled) {
  if (!scaled) return factorial(m);
  if (!switch_phase) return lcm_range(1, m);
  const unsigned s = *switch_phase;
  return std::lcm(lcm_range(1, s), s * lcm_range(s + 1, m));
}

}  // namespace detail

/// General-graph adversary with an "old"/"new" state. While old, phase k
/// repeats the bipartite construction on the initial pool. If the state
/// switches at the end of phase s, each later phase k brings pool/(k s)
/// vertices of degree k attached to the vertices that arrived in phase s.
inline OnlineInstance gen_general_adversary(unsigned m, std::optional<unsigned> switch_phase,
                                            bool scaled = false) {
  if (m < 1 || m > 10) throw std::invalid_argument("general-adversary: m must be in [1, 10]");
  if (switch_phase && (*switch_phase < 1 || *switch_phase > m))
    throw std::invalid_argument("general-adversary: switch phase must be in [1, m]");
  const std::uint64_t pool = detail::general_adversary_pool(m, switch_phase, scaled);

  OnlineInstance inst;
  inst.kind = InstanceKind::general;
  inst.offline_count = static_cast<std::uint32_t>(pool);
  std::vector<VertexId> switched;
  std::uint64_t next_id = pool;
  for (unsigned k = 1; k <= m; ++k) {
    const bool old_state = !switch_phase || k <= *switch_phase;
    const std::uint64_t count = old_state ? pool / k : pool / (static_cast<std::uint64_t>(k) * *switch_phase);
    for (std::uint64_t i = 0; i < count; ++i) {
      ArrivalEvent a;
      a.neighbors.reserve(k);
      for (unsigned j = 0; j < k; ++j) {
        const std::uint64_t idx = j * count + i;
        a.neighbors.push_back({old_state ? static_cast<VertexId>(idx) : switched[idx], 1});
      }
      inst.arrivals.push_back(std::move(a));
    }
    if (switch_phase && k == *switch_phase) switched = detail::range_ids(next_id, count);
    next_id += count;
  }
  return inst;
}

/// Star with an offline center and `delta` leaves arriving one by one.
inline OnlineInstance gen_star(unsigned delta) {
  if (delta < 1) throw std::invalid_argument("star: delta must be positive");
  OnlineInstance inst;
  inst.offline_count = 1;
  inst.arrivals.assign(delta, ArrivalEvent{{{0, 1}}});
  return inst;
}

/// `delta` offline star centers, each receiving delta-1 leaf arrivals, then a
/// final arrival adjacent to every center.
inline OnlineInstance gen_stars_plus_center(unsigned delta) {
  if (delta < 1) throw std::invalid_argument("stars-plus-center: delta must be positive");
  OnlineInstance inst;
  inst.offline_count = delta;
  for (unsigned s = 0; s < delta; ++s)
    for (unsigned leaf = 0; leaf + 1 < delta; ++leaf) inst.arrivals.push_back(ArrivalEvent{{{s, 1}}});
  ArrivalEvent last;
  for (unsigned s = 0; s < delta; ++s) last.neighbors.push_back({s, 1});
  inst.arrivals.push_back(std::move(last));
  return inst;
}

/// Vertex count of each tree level, root level first.
inline std::vector<std::size_t> wf_tree_level_sizes(unsigned n) {
  std::vector<std::size_t> size(n + 1);
  size[0] = 1;
  for (unsigned k = 1; k <= n; ++k) size[k] = size[k - 1] * (n - k + 1);
  return size;
}

/// Tree of height n+1 in which a level-k vertex has n-k+1 children. Leaves
/// are offline; the remaining levels arrive bottom-up, each vertex adjacent
/// to its children.
inline OnlineInstance gen_wf_tree(unsigned n) {
  if (n < 1 || n > 8) throw std::invalid_argument("wf-tree: n must be in [1, 8]");
  const auto size = wf_tree_level_sizes(n);
  OnlineInstance inst;
  inst.kind = InstanceKind::general;
  inst.offline_count = static_cast<std::uint32_t>(size[n]);
  VertexId child_first = 0;
  VertexId next_id = inst.offline_count;
  for (int level = static_cast<int>(n) - 1; level >= 0; --level) {
    const unsigned children = n - level;
    const VertexId level_first = next_id;
    for (std::size_t i = 0; i < size[level]; ++i) {
      ArrivalEvent a;
      for (unsigned c = 0; c < children; ++c)
        a.neighbors.push_back({static_cast<VertexId>(child_first + i * children + c), 1});
      inst.arrivals.push_back(std::move(a));
      ++next_id;
    }
    child_first = level_first;
  }
  return inst;
}

/// Default switch phase of the tight instance, round((beta - 1) n) for
/// beta = 1.586, clamped to [1, n-1].
inline unsigned bounded_wf_tight_default_switch(unsigned n) {
  const auto s = static_cast<long>(std::lround(0.586 * n));
  return static_cast<unsigned>(std::clamp<long>(s, 1, static_cast<long>(n) - 1));
}

/// Tight instance for bounded water filling on general graphs: the general
/// adversary with n phases switching after phase `switch_phase`, built on a
/// pool of b*n offline vertices. Phase-k arrivals take consecutive chunks of
/// k vertices of the current target set (the last chunk may be smaller), so
/// every target vertex still gains exactly one edge per phase while the
/// instance stays polynomial in n.
inline OnlineInstance gen_bounded_wf_tight(unsigned n, unsigned b, std::optional<unsigned> switch_phase = {}) {
  if (n < 2 || n > 512) throw std::invalid_argument("bounded-wf-tight: n must be in [2, 512]");
  if (b < 1 || b > 64) throw std::invalid_argument("bounded-wf-tight: b must be in [1, 64]");
  const unsigned s = switch_phase.value_or(bounded_wf_tight_default_switch(n));
  if (s < 1 || s >= n) throw std::invalid_argument("bounded-wf-tight: switch phase must be in [1, n-1]");

  OnlineInstance inst;
  inst.kind = InstanceKind::general;
  inst.offline_count = n * b;
  std::vector<VertexId> target = detail::range_ids(0, inst.offline_count);
  std::vector<VertexId> switched;
  VertexId next_id = inst.offline_count;
  for (unsigned k = 1; k <= n; ++k) {
    if (k == s + 1) target = switched;
    const VertexId phase_first = next_id;
    for (std::size_t pos = 0; pos < target.size(); pos += k) {
      ArrivalEvent a;
      for (std::size_t j = pos; j < std::min(target.size(), pos + k); ++j) a.neighbors.push_back({target[j], 1});
      inst.arrivals.push_back(std::move(a));
      ++next_id;
    }
    if (k == s) switched = detail::range_ids(phase_first, next_id - phase_first);
  }
  return inst;
}

/// Bipartite one-sided instance whose n online vertices each pick one
/// partner from each of `delta` independent uniform perfect matchings.
/// Repeated partners become multiplicities, so every vertex has degree
/// exactly delta.
inline OnlineInstance gen_random_regular(unsigned n_offline, unsigned delta, std::uint64_t seed) {
  if (n_offline < 1 || delta < 1 || delta > n_offline)
    throw std::invalid_argument("random-regular: need 1 <= delta <= n_offline");
  detail::check_size(static_cast<std::uint64_t>(n_offline) * delta, "random-regular");
  Rng rng(derive_seed(seed, {0x7265677560ULL}));
  std::vector<std::vector<VertexId>> partners(n_offline);
  std::vector<VertexId> perm(n_offline);
  for (unsigned r = 0; r < delta; ++r) {
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    for (unsigned i = 0; i < n_offline; ++i) partners[i].push_back(perm[i]);
  }
  OnlineInstance inst;
  inst.offline_count = n_offline;
  inst.declared_max_degree = delta;
  inst.arrivals.resize(n_offline);
  for (unsigned i = 0; i < n_offline; ++i) {
    auto& nbs = inst.arrivals[i].neighbors;
    for (VertexId u : partners[i]) {
      auto it = std::find_if(nbs.begin(), nbs.end(), [u](const Neighbor& nb) { return nb.vertex == u; });
      if (it == nbs.end())
        nbs.push_back({u, 1});
      else
        ++it->multiplicity;
    }
  }
  return inst;
}

/// Random one-sided bipartite instance for fuzzing: each (online, offline)
/// pair is an edge with probability `density`, with multiplicity drawn
/// uniformly from [1, max_multiplicity].
inline OnlineInstance gen_random_bipartite(unsigned n_offline, unsigned n_online, double density,
                                           unsigned max_multiplicity, std::uint64_t seed) {
  Rng rng(derive_seed(seed, {0x62697061ULL}));
  OnlineInstance inst;
  inst.offline_count = n_offline;
  inst.arrivals.resize(n_online);
  for (auto& a : inst.arrivals)
    for (unsigned u = 0; u < n_offline; ++u)
      if (rng.bernoulli(density))
        a.neighbors.push_back({u, 1 + static_cast<std::uint32_t>(rng.below(std::max(1u, max_multiplicity)))});
  return inst;
}

/// Random general vertex-arrival instance for fuzzing: each arrival links to
/// each earlier vertex with probability `density`.
inline OnlineInstance gen_random_general(unsigned n_offline, unsigned n_online, double density,
                                         std::uint64_t seed) {
  Rng rng(derive_seed(seed, {0x67656eULL}));
  OnlineInstance inst;
  inst.kind = InstanceKind::general;
  inst.offline_count = n_offline;
  inst.arrivals.resize(n_online);
  for (unsigned i = 0; i < n_online; ++i)
    for (VertexId u = 0; u < n_offline + i; ++u)
      if (rng.bernoulli(density)) inst.arrivals[i].neighbors.push_back({u, 1});
  return inst;
}

// ---------------------------------------------------------------------------
// Family dispatch

enum class Family {
  bipartite_hard,
  dense_blowup,
  general_adversary,
  star,
  stars_plus_center,
  wf_tree,
  bounded_wf_tight,
  random_regular,
};

inline const std::map<std::string, Family>& family_names() {
  static const std::map<std::string, Family> names{
      {"bipartite-hard", Family::bipartite_hard},       {"dense-blowup", Family::dense_blowup},
      {"general-adversary", Family::general_adversary}, {"star", Family::star},
      {"stars-plus-center", Family::stars_plus_center}, {"wf-tree", Family::wf_tree},
      {"bounded-wf-tight", Family::bounded_wf_tight},   {"random-regular", Family::random_regular},
  };
  return names;
}

inline Family parse_family(const std::string& name) {
  const auto& names = family_names();
  auto it = names.find(name);
  if (it == names.end()) throw std::invalid_argument("unknown family '" + name + "'");
  return it->second;
}

inline std::string family_name(Family f) {
  for (const auto& [name, fam] : family_names())
    if (fam == f) return name;
  return "unknown";
}

struct GeneratorSpec {
  Family family = Family::bipartite_hard;
  std::map<std::string, std::int64_t> params;
  std::uint64_t seed = 0;
};

namespace detail {

inline std::int64_t param(const GeneratorSpec& spec, const std::string& key) {
  auto it = spec.params.find(key);
  if (it == spec.params.end())
    throw std::invalid_argument(family_name(spec.family) + ": missing parameter '" + key + "'");
  return it->second;
}

inline std::optional<std::int64_t> opt_param(const GeneratorSpec& spec, const std::string& key) {
  auto it = spec.params.find(key);
  if (it == spec.params.end()) return std::nullopt;
  return it->second;
}

inline unsigned positive(std::int64_t v, const std::string& what) {
  if (v < 1 || v > std::int64_t{1} << 30) throw std::invalid_argument(what + " must be a positive integer");
  return static_cast<unsigned>(v);
}

}  // namespace detail

/// Builds an instance from a family name and integer parameters:
///   bipartite-hard     m, [truncate], [scaled]
///   dense-blowup       m, t, [scaled]           (blow-up of bipartite-hard)
///   general-adversary  m, [switch] (0 = never), [scaled]
///   star / stars-plus-center   delta
///   wf-tree            n
///   bounded-wf-tight   n, b, [switch]
///   random-regular     n, delta                 (uses the spec seed)
inline OnlineInstance generate(const GeneratorSpec& spec) {
  using detail::opt_param;
  using detail::param;
  using detail::positive;
  const bool scaled = opt_param(spec, "scaled").value_or(0) != 0;
  switch (spec.family) {
    case Family::bipartite_hard: {
      std::optional<unsigned> trunc;
      if (auto t = opt_param(spec, "truncate")) trunc = positive(*t, "truncate");
      return gen_bipartite_hard(positive(param(spec, "m"), "m"), trunc, scaled);
    }
    case Family::dense_blowup:
      return gen_dense_blowup(gen_bipartite_hard(positive(param(spec, "m"), "m"), std::nullopt, scaled),
                              positive(param(spec, "t"), "t"));
    case Family::general_adversary: {
      std::optional<unsigned> sw;
      if (auto s = opt_param(spec, "switch"); s && *s != 0) sw = positive(*s, "switch");
      return gen_general_adversary(positive(param(spec, "m"), "m"), sw, scaled);
    }
    case Family::star:
      return gen_star(positive(param(spec, "delta"), "delta"));
    case Family::stars_plus_center:
      return gen_stars_plus_center(positive(param(spec, "delta"), "delta"));
    case Family::wf_tree:
      return gen_wf_tree(positive(param(spec, "n"), "n"));
    case Family::bounded_wf_tight: {
      std::optional<unsigned> sw;
      if (auto s = opt_param(spec, "switch")) sw = positive(*s, "switch");
      return gen_bounded_wf_tight(positive(param(spec, "n"), "n"), positive(param(spec, "b"), "b"), sw);
    }
    case Family::random_regular:
      return gen_random_regular(positive(param(spec, "n"), "n"), positive(param(spec, "delta"), "delta"),
                                spec.seed);
  }
  throw std::invalid_argument("unknown family");
}

}  // namespace edgecolor
