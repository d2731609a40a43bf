#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include "edgecolor/coloring.hpp"
#include "edgecolor/fractional.hpp"
#include "edgecolor/generators.hpp"
#include "edgecolor/instance_io.hpp"
#include "edgecolor/phased.hpp"
#include "edgecolor/rng.hpp"
#include "edgecolor/rounding.hpp"

namespace edgecolor {

enum class Algorithm { greedy, repeat_maximal, repeat_marking, alg2, alg3 };

inline const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names{"greedy", "repeat-maximal", "repeat-marking", "alg2", "alg3"};
  return names;
}
inline std::string to_string(Algorithm a) { return algorithm_names()[static_cast<std::size_t>(a)]; }
inline Algorithm parse_algorithm(const std::string& s) {
  const auto& names = algorithm_names();
  const auto it = std::find(names.begin(), names.end(), s);
  if (it == names.end()) throw std::invalid_argument("unknown algorithm '" + s + "'");
  return static_cast<Algorithm>(it - names.begin());
}

struct AlgorithmParams {
  PhaseConfig phase;
  /// Replace p, P, epsilon and the slack by their asymptotic defaults.
  bool asymptotic_constants = false;
  /// Known delta for alg3 and repeat-marking; defaults to the declared or
  /// measured maximum degree.
  std::optional<std::uint32_t> delta;
};

/// Runs one algorithm once and checks the result with validate_coloring.
inline ColoringRun run_algorithm(const OnlineInstance& inst, Algorithm algo, const AlgorithmParams& params,
                                 std::uint64_t seed) {
  const std::uint32_t measured = max_degree(inst);
  const std::uint32_t delta = params.delta.value_or(inst.declared_max_degree.value_or(measured));
  ColoringRun run;
  switch (algo) {
    case Algorithm::greedy:
      run = greedy_coloring(inst);
      break;
    case Algorithm::repeat_maximal:
      run = repeated_maximal_baseline(inst);
      break;
    case Algorithm::repeat_marking:
      run = repeated_marking_baseline(inst, seed, delta, delta);
      break;
    case Algorithm::alg2: {
      PhaseConfig cfg = params.phase;
      if (params.asymptotic_constants) {
        auto asym = asymptotic_phase_config(inst.vertex_count(), cfg.delta_prime);
        asym.frac = cfg.frac;
        asym.beta = cfg.beta;
        cfg = asym;
      }
      run = algorithm2_unknown_delta(inst, cfg, seed);
      break;
    }
    case Algorithm::alg3: {
      PhaseConfig cfg = params.phase;
      if (params.asymptotic_constants) cfg.slack = 8.0;
      const auto schedule = known_delta_schedule(delta, inst.vertex_count(), cfg);
      if (schedule.degenerate && params.asymptotic_constants)
        throw std::runtime_error("known-delta schedule is degenerate under the asymptotic constants at delta=" +
                                 std::to_string(delta) + ", n=" + std::to_string(inst.vertex_count()) +
                                 "; a desk-mode --slack is required");
      run = algorithm3_known_delta(inst, delta, cfg, seed);
      break;
    }
  }
  if (const auto v = validate_coloring(run.coloring, inst))
    throw std::logic_error(to_string(algo) + " produced an invalid coloring: " + v->message);
  return run;
}

struct ExperimentConfig {
  /// Generator spec or instance file.
  std::variant<GeneratorSpec, std::filesystem::path> instance;
  Algorithm algo = Algorithm::greedy;
  AlgorithmParams params;
  std::uint32_t trials = 1;
  std::uint64_t seed = 1;
  /// Worker threads; 0 uses the hardware concurrency.
  unsigned threads = 1;
  /// When false, wallclock_ms is reported as 0 so reports are byte-stable.
  bool timing = true;
};

struct TrialRow {
  std::string instance;
  std::string algo;
  std::uint64_t seed = 0;
  std::uint32_t delta = 0;
  std::uint32_t colors_phases = 0;
  std::uint32_t colors_greedy = 0;
  std::uint32_t colors_total = 0;
  double ratio = 0;
  double wallclock_ms = 0;
};

struct Summary {
  double mean = 0, stddev = 0, min = 0, max = 0;
};

inline Summary summarize(std::span<const double> xs) {
  Summary s;
  if (xs.empty()) return s;
  s.min = *std::min_element(xs.begin(), xs.end());
  s.max = *std::max_element(xs.begin(), xs.end());
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  if (xs.size() > 1) {
    double ss = 0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / (xs.size() - 1));
  }
  return s;
}

struct ResultRecord {
  std::vector<TrialRow> rows;
  Summary colors_total;
  Summary ratio;

  /// Recomputes the aggregates from the rows.
  void aggregate() {
    std::vector<double> c, r;
    for (const auto& row : rows) {
      c.push_back(row.colors_total);
      r.push_back(row.ratio);
    }
    colors_total = summarize(c);
    ratio = summarize(r);
  }
};

inline std::string instance_label(const GeneratorSpec& spec) {
  std::string s = family_name(spec.family);
  char sep = ':';
  for (const auto& [k, v] : spec.params) {
    s += sep + k + "=" + std::to_string(v);
    sep = ';';
  }
  // Only the random family depends on the seed.
  if (spec.family == Family::random_regular) s += std::string(1, sep) + "seed=" + std::to_string(spec.seed);
  return s;
}

inline std::pair<OnlineInstance, std::string> resolve_instance(const ExperimentConfig& cfg) {
  if (const auto* spec = std::get_if<GeneratorSpec>(&cfg.instance)) return {generate(*spec), instance_label(*spec)};
  const auto& path = std::get<std::filesystem::path>(cfg.instance);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file " + path.string());
  return {read_instance(in), path.filename().string()};
}

/// Per-trial seed: derived from the master seed and the trial index only.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint32_t trial) {
  return derive_seed(master, {0x747269616cULL, trial});
}

inline ResultRecord run_experiment(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("trials must be at least 1");
  const auto [inst, label] = resolve_instance(cfg);
  const bool one_sided_only = cfg.algo != Algorithm::greedy;
  if (one_sided_only && inst.kind != InstanceKind::bipartite_one_sided)
    throw std::invalid_argument(to_string(cfg.algo) + " needs a one-sided bipartite instance");

  ResultRecord rec;
  rec.rows.resize(cfg.trials);
  const auto one = [&](std::uint32_t t) {
    TrialRow& row = rec.rows[t];
    row.instance = label;
    row.algo = to_string(cfg.algo);
    row.seed = trial_seed(cfg.seed, t);
    const auto start = std::chrono::steady_clock::now();
    const auto run = run_algorithm(inst, cfg.algo, cfg.params, row.seed);
    const auto stop = std::chrono::steady_clock::now();
    row.delta = max_degree(inst);
    row.colors_phases = run.colors_phases;
    row.colors_greedy = run.colors_greedy;
    row.colors_total = run.colors_total;
    row.ratio = row.delta > 0 ? static_cast<double>(run.colors_total) / row.delta : 0.0;
    row.wallclock_ms = cfg.timing ? std::chrono::duration<double, std::milli>(stop - start).count() : 0.0;
  };

  unsigned workers = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
  workers = std::min<unsigned>(workers, cfg.trials);
  if (workers <= 1) {
    for (std::uint32_t t = 0; t < cfg.trials; ++t) one(t);
  } else {
    std::mutex mu;
    std::uint32_t next = 0;
    std::exception_ptr error;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        while (true) {
          std::uint32_t t;
          {
            std::lock_guard lock(mu);
            if (next >= cfg.trials || error) return;
            t = next++;
          }
          try {
            one(t);
          } catch (...) {
            std::lock_guard lock(mu);
            if (!error) error = std::current_exception();
          }
        }
      });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }
  rec.aggregate();
  return rec;
}

namespace detail {

inline std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

}  // namespace detail

inline void write_csv(std::ostream& os, std::span<const TrialRow> rows, bool header = true) {
  if (header) os << "instance,algo,seed,delta,colors_phases,colors_greedy,colors_total,ratio,wallclock_ms\n";
  for (const auto& r : rows)
    os << detail::csv_field(r.instance) << ',' << r.algo << ',' << r.seed << ',' << r.delta << ',' << r.colors_phases
       << ',' << r.colors_greedy << ',' << r.colors_total << ',' << detail::fixed(r.ratio, 6) << ','
       << detail::fixed(r.wallclock_ms, 3) << '\n';
}

inline nlohmann::ordered_json summary_json(const Summary& s) {
  return {{"mean", s.mean}, {"stddev", s.stddev}, {"min", s.min}, {"max", s.max}};
}

inline nlohmann::ordered_json to_json(const ResultRecord& rec) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : rec.rows)
    rows.push_back({{"instance", r.instance},
                    {"algo", r.algo},
                    {"seed", r.seed},
                    {"delta", r.delta},
                    {"colors_phases", r.colors_phases},
                    {"colors_greedy", r.colors_greedy},
                    {"colors_total", r.colors_total},
                    {"ratio", r.ratio},
                    {"wallclock_ms", r.wallclock_ms}});
  return {{"rows", rows},
          {"aggregate", {{"colors_total", summary_json(rec.colors_total)}, {"ratio", summary_json(rec.ratio)}}}};
}

inline void write_json(std::ostream& os, const ResultRecord& rec) { os << to_json(rec).dump(2) << '\n'; }

/// Fisher-Yates with the library's own bounded draws, so the order does not
/// depend on the standard library.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

/// Wilson score interval for k successes in n trials.
struct Interval {
  double lo = 0, hi = 1;
};

inline Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z = 2.5758293035489004) {
  if (n == 0) return {};
  const double p = static_cast<double>(k) / n;
  const double z2 = z * z / n;
  const double center = (p + z2 / 2) / (1 + z2);
  const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4.0 * n * n)) / (1 + z2);
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

/// A fractional matching presented online: arrival a offers its candidates.
struct OnlineFractionalMatching {
  std::size_t vertex_count = 0;
  std::vector<std::vector<Candidate>> arrivals;
};

enum class Sampling { iid, stratified };

struct EdgeEstimate {
  std::size_t arrival = 0;
  VertexId vertex = 0;
  double x = 0;
  std::uint64_t hits = 0;
  double frequency = 0;
  Interval wilson;
  /// 3 sigma of an independent-trial estimate at x.
  double sigma = 0;
  /// The Wilson interval lies entirely above x.
  bool flagged_above = false;
};

struct ProbabilityEstimate {
  std::vector<EdgeEstimate> edges;
  std::uint64_t trials = 0;
  /// The deterministic recursion never had to scale a step down.
  bool no_scaling = true;
  std::size_t flagged = 0;
};

/// Monte Carlo estimate of every edge's match probability under the
/// proposal rounder. Stratified sampling runs all trials in lockstep and,
/// at each arrival, gives trial r the uniform (pi(r) + U_r) / trials for a
/// fresh random permutation pi; every trial is still a valid sample path.
inline ProbabilityEstimate estimate_edge_probabilities(const OnlineFractionalMatching& fm, std::uint64_t trials,
                                                       std::uint64_t seed, Sampling sampling = Sampling::iid) {
  if (trials < 1000) throw std::invalid_argument("probability estimates need at least 1000 trials");
  ProbabilityEstimate out;
  out.trials = trials;
  {
    ProposalRounder probe(fm.vertex_count);
    for (const auto& a : fm.arrivals) {
      probe.step(a, 1.0);
      if (probe.last_step_scaled()) out.no_scaling = false;
    }
  }
  std::vector<std::size_t> first(fm.arrivals.size());
  for (std::size_t a = 0; a < fm.arrivals.size(); ++a) {
    first[a] = out.edges.size();
    for (const auto& c : fm.arrivals[a]) out.edges.push_back({a, c.vertex, c.x});
  }

  Rng rng(derive_seed(seed, {0x70726f6265ULL}));
  if (sampling == Sampling::iid) {
    for (std::uint64_t t = 0; t < trials; ++t) {
      ProposalRounder r(fm.vertex_count);
      for (std::size_t a = 0; a < fm.arrivals.size(); ++a)
        if (const auto hit = r.step(fm.arrivals[a], rng.uniform())) ++out.edges[first[a] + *hit].hits;
    }
  } else {
    std::vector<ProposalRounder> rs(trials, ProposalRounder(fm.vertex_count));
    std::vector<std::uint64_t> perm(trials);
    for (std::size_t a = 0; a < fm.arrivals.size(); ++a) {
      std::iota(perm.begin(), perm.end(), 0);
      shuffle(perm, rng);
      for (std::uint64_t t = 0; t < trials; ++t) {
        const double u = (static_cast<double>(perm[t]) + rng.uniform()) / static_cast<double>(trials);
        if (const auto hit = rs[t].step(fm.arrivals[a], std::min(u, std::nextafter(1.0, 0.0))))
          ++out.edges[first[a] + *hit].hits;
      }
    }
  }
  for (auto& e : out.edges) {
    e.frequency = static_cast<double>(e.hits) / trials;
    e.wilson = wilson_interval(e.hits, trials);
    e.sigma = std::sqrt(e.x * (1 - e.x) / trials);
    e.flagged_above = e.wilson.lo > e.x;
    out.flagged += e.flagged_above;
  }
  return out;
}

/// Random fractional matching: each arrival offers up to `max_degree`
/// offline vertices values in [0, eps], kept within every vertex's budget.
inline OnlineFractionalMatching random_fractional_matching(std::size_t offline, std::size_t online, double eps,
                                                           std::uint32_t max_degree, std::uint64_t seed) {
  Rng rng(derive_seed(seed, {0x66726163ULL}));
  OnlineFractionalMatching fm;
  fm.vertex_count = offline + online;
  std::vector<double> budget(offline, 1.0);
  for (std::size_t a = 0; a < online; ++a) {
    std::vector<Candidate> cands;
    double own = 1.0;
    std::vector<VertexId> pool(offline);
    std::iota(pool.begin(), pool.end(), 0);
    shuffle(pool, rng);
    for (std::size_t i = 0; i < std::min<std::size_t>(max_degree, offline); ++i) {
      const VertexId u = pool[i];
      const double x = std::min({eps * rng.uniform(), budget[u], own});
      if (x <= 0) continue;
      budget[u] -= x;
      own -= x;
      cands.push_back({u, x});
    }
    fm.arrivals.push_back(std::move(cands));
  }
  return fm;
}

/// One color column of a feasible fractional coloring, presented in arrival
/// order: arrival a offers each earlier endpoint its value on `color`.
inline OnlineFractionalMatching column_matching(const FractionalColoring& fc, std::uint32_t color) {
  if (!fc.retains_values()) throw std::invalid_argument("column extraction needs retained values");
  OnlineFractionalMatching fm;
  fm.vertex_count = fc.vertex_count();
  for (EdgeId e = 0; e < fc.edge_count(); ++e) {
    const auto& rec = fc.edge(e);
    if (fm.arrivals.size() <= rec.arrival_index) fm.arrivals.resize(rec.arrival_index + 1);
    for (const auto& cv : fc.values(e))
      if (cv.color == color && cv.value > 0) fm.arrivals[rec.arrival_index].push_back({rec.earlier, cv.value});
  }
  return fm;
}

}  // namespace edgecolor
