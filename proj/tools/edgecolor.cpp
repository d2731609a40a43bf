#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "edgecolor/edgecolor.hpp"

using namespace edgecolor;

namespace {

// Writes to the named file, or to stdout for "" or "-".
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open " + path + " for writing");
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::map<std::string, std::int64_t> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, std::int64_t> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--param", "expected k=v, got '" + item + "'");
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(item.substr(eq + 1), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() - eq - 1)
      throw CLI::ValidationError("--param", "value of '" + item.substr(0, eq) + "' is not an integer");
    out[item.substr(0, eq)] = v;
  }
  return out;
}

// Instance selection shared by run, probe and validate.
struct InstanceArgs {
  std::string file;
  std::string family;
  std::vector<std::string> params;
  std::optional<std::uint64_t> instance_seed;

  void add(CLI::App* app) {
    auto* f = app->add_option("--instance", file, "Instance file");
    auto* g = app->add_option("--family", family, "Generator family instead of a file")
                  ->check(CLI::IsMember([] {
                    std::vector<std::string> names;
                    for (const auto& [n, _] : family_names()) names.push_back(n);
                    return names;
                  }()));
    f->excludes(g);
    app->add_option("--param", params, "Generator parameter k=v (repeatable)");
    app->add_option("--instance-seed", instance_seed, "Generator seed (defaults to --seed)");
  }

  bool given() const { return !file.empty() || !family.empty(); }

  std::variant<GeneratorSpec, std::filesystem::path> source(std::uint64_t seed) const {
    if (!file.empty()) return std::filesystem::path(file);
    if (family.empty()) throw CLI::RequiredError("--instance or --family");
    return GeneratorSpec{parse_family(family), parse_params(params), instance_seed.value_or(seed)};
  }

  OnlineInstance load(std::uint64_t seed) const {
    ExperimentConfig cfg;
    cfg.instance = source(seed);
    return resolve_instance(cfg).first;
  }
};

const std::map<std::string, FractionalAlgo> frac_names{
    {"trivial", FractionalAlgo::trivial}, {"bwf", FractionalAlgo::bounded}, {"uwf", FractionalAlgo::unbounded}};

std::string exact(const mpq_class& q) { return q.get_str(); }

std::string decimal(long double v) {
  std::ostringstream os;
  os.precision(15);
  os << v;
  return os.str();
}

int cmd_gen(const std::string& family, const std::vector<std::string>& params, std::uint64_t seed,
            const std::string& out) {
  const auto inst = generate(GeneratorSpec{parse_family(family), parse_params(params), seed});
  Sink sink(out);
  sink.os() << "# " << instance_label(GeneratorSpec{parse_family(family), parse_params(params), seed}) << '\n';
  write_instance(sink.os(), inst);
  return 0;
}

int cmd_lb(const std::string& family, std::uint32_t m, const std::string& mode, const std::string& out, bool force) {
  Sink sink(out);
  if (mode == "export") {
    const auto lp = family == "bipartite" ? build_bipartite_lp(m) : build_general_lp(m);
    export_lp(lp, sink.os(), family + " lower-bound LP, m=" + std::to_string(m));
    return 0;
  }
  nlohmann::ordered_json j;
  j["family"] = family;
  j["m"] = m;
  if (mode == "dual-cert") {
    if (family != "bipartite") throw std::invalid_argument("the dual certificate exists for the bipartite LP only");
    j["c"] = certificate_cutoff(m);
    j["value_decimal"] = decimal(dual_certificate_value(m));
    if (m <= 20000) {
      const auto cert = eval_dual_certificate(m);
      const auto violation = verify_dual_feasibility(cert);
      j["t"] = exact(cert.t);
      j["value"] = exact(cert.value);
      j["alpha_column_sum"] = exact(alpha_column_sum(cert));
      j["feasible"] = !violation.has_value();
      if (violation) j["violation"] = violation->constraint + ": " + violation->message;
    } else {
      j["note"] = "exact rational certificate skipped above m=20000; value from extended-precision summation";
    }
  } else {
    const std::uint32_t limit = family == "bipartite" ? 40 : 12;
    if (m > limit && !force)
      throw std::invalid_argument("embedded simplex is limited to m <= " + std::to_string(limit) + " for the " +
                                  family + " LP; use --mode export or --force");
    const auto lp = family == "bipartite" ? build_bipartite_lp(m) : build_general_lp(m);
    const auto sol = solve_lp(lp);
    j["status"] = to_string(sol.status);
    j["variables"] = lp.var_count();
    j["constraints"] = lp.constraints.size();
    j["pivots"] = sol.pivots;
    if (sol.status == LpStatus::optimal) {
      j["value"] = static_cast<double>(sol.value);
      if (family == "bipartite" && m >= 3) j["certificate_value"] = static_cast<double>(dual_certificate_value(m));
      nlohmann::ordered_json x = nlohmann::ordered_json::object();
      for (std::size_t v = 0; v < lp.var_count(); ++v)
        if (sol.x[v] > 1e-12L) x[lp.var_names[v]] = static_cast<double>(sol.x[v]);
      j["solution"] = x;
    }
  }
  sink.os() << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online edge coloring simulator"};
  app.set_config("--config", "", "TOML-style key = value file; subcommand keys go under [gen], [run], ...");
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate an instance file");
  std::string gen_family, gen_out;
  std::vector<std::string> gen_params;
  std::uint64_t gen_seed = 1;
  gen->add_option("--family", gen_family, "Instance family")->required();
  gen->add_option("--param", gen_params, "Family parameter k=v (repeatable)");
  gen->add_option("--seed", gen_seed, "Generator seed")->envname("EDGECOLOR_SEED");
  gen->add_option("--out", gen_out, "Output file (default stdout)");

  // run
  auto* run = app.add_subcommand("run", "Run an integral coloring algorithm");
  InstanceArgs run_inst;
  run_inst.add(run);
  std::string algo = "alg3", frac = "bwf", out_format = "csv", output;
  AlgorithmParams params;
  std::uint32_t trials = 1;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool no_timing = false, summary = false;
  std::optional<std::uint32_t> phases, ell;
  run->add_option("--algo", algo, "Algorithm")->check(CLI::IsMember(algorithm_names()));
  run->add_option("--frac", frac, "Fractional algorithm inside alg2")->check(CLI::IsMember({"trivial", "bwf", "uwf"}));
  run->add_option("--beta", params.phase.beta, "Water-filling beta")->check(CLI::Range(1.0, 2.0));
  run->add_option("--delta-prime", params.phase.delta_prime, "Lower bound on delta known in advance");
  run->add_option("--p", params.phase.p, "Column sampling probability")->check(CLI::Range(0.0, 1.0));
  run->add_option("--epsilon", params.phase.epsilon, "Per edge-color bound of the fractional algorithm");
  run->add_option("--phases", phases, "Number of phases for alg2");
  run->add_option("--slack", params.phase.slack, "Slack coefficient of the alg3 degree schedule");
  run->add_option("--ell", ell, "Colors per alg3 phase");
  run->add_option("--delta", params.delta, "Known delta for alg3 and repeat-marking");
  run->add_flag("--paper-constants", params.asymptotic_constants, "Use the asymptotic constants");
  run->add_option("--seed", seed, "Master seed")->envname("EDGECOLOR_SEED");
  run->add_option("--trials", trials, "Trials")->check(CLI::PositiveNumber);
  run->add_option("--threads", threads, "Worker threads (0 = all cores)");
  run->add_option("--out", out_format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--output", output, "Report file (default stdout)");
  run->add_flag("--no-timing", no_timing, "Report wallclock_ms as 0");
  run->add_flag("--summary", summary, "Print the aggregate to stderr");

  // lb
  auto* lb = app.add_subcommand("lb", "Lower-bound LPs and the dual certificate");
  std::string lb_family = "bipartite", lb_mode = "dual-cert", lb_out;
  std::uint32_t lb_m = 0;
  bool lb_force = false;
  lb->add_option("--family", lb_family, "LP family")->check(CLI::IsMember({"bipartite", "general"}));
  lb->add_option("--m", lb_m, "Number of phases")->required()->check(CLI::PositiveNumber);
  lb->add_option("--mode", lb_mode, "What to do")->check(CLI::IsMember({"dual-cert", "solve", "export"}));
  lb->add_option("--out", lb_out, "Output file (default stdout)");
  lb->add_flag("--force", lb_force, "Solve beyond the embedded solver's size guard");

  // probe
  auto* probe = app.add_subcommand("probe", "Estimate the rounder's per-edge match probabilities");
  InstanceArgs probe_inst;
  probe_inst.add(probe);
  std::string probe_frac = "bwf", sampling = "iid", probe_out;
  double probe_beta = std::numbers::e / (std::numbers::e - 1);
  std::uint32_t column = 1;
  std::uint64_t probe_trials = 100000, probe_seed = 1;
  std::vector<std::size_t> random_sides;
  double eps = 0.05;
  std::uint32_t degree = 15;
  probe->add_option("--frac", probe_frac, "Fractional algorithm")->check(CLI::IsMember({"trivial", "bwf", "uwf"}));
  probe->add_option("--beta", probe_beta, "Water-filling beta")->check(CLI::Range(1.0, 2.0));
  probe->add_option("--column", column, "Color column of the stretched coloring (1-based)")
      ->check(CLI::PositiveNumber);
  probe->add_option("--random", random_sides, "Random fractional matching: OFFLINE ONLINE")->expected(2);
  probe->add_option("--eps", eps, "Largest value of a random matching");
  probe->add_option("--degree", degree, "Candidates per arrival of a random matching");
  probe->add_option("--trials", probe_trials, "Trials (>= 1000)");
  probe->add_option("--seed", probe_seed, "Seed")->envname("EDGECOLOR_SEED");
  probe->add_option("--sampling", sampling, "iid or stratified uniforms")->check(CLI::IsMember({"iid", "stratified"}));
  probe->add_option("--out", probe_out, "Output file (default stdout)");

  // validate
  auto* val = app.add_subcommand("validate", "Check an instance, and optionally an algorithm's coloring of it");
  InstanceArgs val_inst;
  val_inst.add(val);
  std::string val_algo;
  std::uint64_t val_seed = 1;
  val->add_option("--algo", val_algo, "Also run and validate this algorithm")->check(CLI::IsMember(algorithm_names()));
  val->add_option("--seed", val_seed, "Seed")->envname("EDGECOLOR_SEED");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen(gen_family, gen_params, gen_seed, gen_out);

    if (*run) {
      params.phase.frac = frac_names.at(frac);
      params.phase.num_phases = phases;
      params.phase.ell = ell;
      ExperimentConfig cfg;
      cfg.instance = run_inst.source(seed);
      cfg.algo = parse_algorithm(algo);
      cfg.params = params;
      cfg.trials = trials;
      cfg.seed = seed;
      cfg.threads = threads;
      cfg.timing = !no_timing;
      const auto rec = run_experiment(cfg);
      Sink sink(output);
      if (out_format == "csv")
        write_csv(sink.os(), rec.rows);
      else
        write_json(sink.os(), rec);
      if (summary)
        std::cerr << "colors_total mean " << rec.colors_total.mean << " sd " << rec.colors_total.stddev << " min "
                  << rec.colors_total.min << " max " << rec.colors_total.max << "; ratio mean " << rec.ratio.mean
                  << '\n';
      return 0;
    }

    if (*lb) return cmd_lb(lb_family, lb_m, lb_mode, lb_out, lb_force);

    if (*probe) {
      OnlineFractionalMatching fm;
      if (!random_sides.empty()) {
        if (probe_inst.given()) throw std::invalid_argument("--random excludes --instance/--family");
        fm = random_fractional_matching(random_sides[0], random_sides[1], eps, degree, probe_seed);
      } else {
        const auto inst = probe_inst.load(probe_seed);
        const auto algo_f = frac_names.at(probe_frac);
        WaterFillConfig wf;
        wf.beta = probe_beta;
        const auto fr = run_fractional(inst, algo_f, wf);
        const double alpha = algo_f == FractionalAlgo::bounded     ? theoretical_bound(probe_beta, inst.kind)
                             : algo_f == FractionalAlgo::unbounded ? 2.0
                                                                   : 1.0;
        fm = column_matching(stretch_to_feasible(fr.coloring, alpha), column - 1);
      }
      const auto est = estimate_edge_probabilities(
          fm, probe_trials, probe_seed, sampling == "iid" ? Sampling::iid : Sampling::stratified);
      Sink sink(probe_out);
      sink.os() << "arrival,vertex,x,frequency,wilson_lo,wilson_hi,flagged\n";
      for (const auto& e : est.edges)
        sink.os() << e.arrival << ',' << e.vertex << ',' << decimal(e.x) << ',' << decimal(e.frequency) << ','
                  << decimal(e.wilson.lo) << ',' << decimal(e.wilson.hi) << ',' << (e.flagged_above ? 1 : 0) << '\n';
      std::cerr << est.edges.size() << " edges, " << est.trials << " trials, no_scaling=" << est.no_scaling
                << ", flagged=" << est.flagged << '\n';
      return est.flagged == 0 ? 0 : 3;
    }

    if (*val) {
      const auto inst = val_inst.load(val_seed);
      if (const auto v = validate_instance(inst)) {
        std::cout << "instance invalid: " << v->message << '\n';
        return 1;
      }
      std::cout << "instance ok: " << inst.vertex_count() << " vertices, " << inst.edge_copy_count()
                << " edge copies, max degree " << max_degree(inst) << '\n';
      if (!val_algo.empty()) {
        const auto r = run_algorithm(inst, parse_algorithm(val_algo), {}, val_seed);
        std::cout << "coloring ok: " << val_algo << " used " << r.colors_total << " colors\n";
      }
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
