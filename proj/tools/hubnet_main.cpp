#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hubmodel/estimator.hpp"
#include "hubmodel/evaluation.hpp"
#include "hubmodel/identifiability.hpp"
#include "hubmodel/io.hpp"
#include "hubmodel/likelihood.hpp"
#include "hubmodel/rng.hpp"
#include "hubmodel/simulate.hpp"

namespace {

using namespace hubmodel;
using nlohmann::json;

json load_config(const std::string& path) {
  if (path.empty()) return json();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot open config " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInputError(path + ": " + e.what());
  }
}

// Config file keys mirror long flag names; explicit flags win.
class ConfigLayer {
 public:
  ConfigLayer(CLI::App* sub, json cfg) : sub_(sub), cfg_(std::move(cfg)) {}

  template <class T>
  void apply(const std::string& flag, T& field) const {
    if (cfg_.is_null() || !cfg_.contains(flag)) return;
    if (sub_->count("--" + flag) > 0) return;
    try {
      field = cfg_.at(flag).get<T>();
    } catch (const json::exception& e) {
      throw InvalidInputError("config key '" + flag + "': " + e.what());
    }
  }

  bool provides(const std::string& flag) const {
    return !cfg_.is_null() && cfg_.contains(flag);
  }

 private:
  CLI::App* sub_;
  json cfg_;
};

std::uint64_t env_seed() {
  const char* raw = std::getenv("HUBNET_SEED");
  if (!raw || !*raw) return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (!end || *end != '\0')
    throw InvalidInputError("HUBNET_SEED is not an unsigned integer");
  return static_cast<std::uint64_t>(v);
}

std::uint64_t resolve_seed(const CLI::App* sub, const ConfigLayer& cfg,
                           std::uint64_t flag_value) {
  if (sub->count("--seed") > 0 || cfg.provides("seed")) return flag_value;
  return env_seed();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

int parse_positive_int(const std::string& s, const char* what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || v <= 0)
    throw InvalidInputError(std::string(what) + " '" + s +
                            "' is not a positive integer");
  return v;
}

struct CellSpec {
  int n_L = 0;
  int n = 0;
};

CellSpec parse_cell(const std::string& spec) {
  CellSpec c;
  for (const std::string& tok : split(spec, ',')) {
    const std::size_t eq = tok.find('=');
    if (eq == std::string::npos)
      throw InvalidInputError("cell token '" + tok + "' is not key=value");
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    if (key == "nL")
      c.n_L = parse_positive_int(val, "nL");
    else if (key == "n")
      c.n = parse_positive_int(val, "n");
    else
      throw InvalidInputError("cell key '" + key + "' (expected nL or n)");
  }
  if (c.n_L == 0 || c.n == 0)
    throw InvalidInputError("cell spec needs both nL= and n=");
  return c;
}

struct SimulateArgs {
  std::string variant;
  int n_L = 0, n = 0, T = 0;
  std::uint64_t seed = 0;
  double rho0 = 0.2, pi = 0.05;
  double in_lo = 0.2, in_hi = 0.4, out_lo = 0.0, out_hi = 0.2;
  std::string out_dir = ".";
  std::string config;
};

int run_simulate(CLI::App* sub, SimulateArgs& a) {
  ConfigLayer cfg(sub, load_config(a.config));
  cfg.apply("variant", a.variant);
  cfg.apply("nL", a.n_L);
  cfg.apply("n", a.n);
  cfg.apply("T", a.T);
  cfg.apply("seed", a.seed);
  cfg.apply("rho0", a.rho0);
  cfg.apply("pi", a.pi);
  cfg.apply("in-lo", a.in_lo);
  cfg.apply("in-hi", a.in_hi);
  cfg.apply("out-lo", a.out_lo);
  cfg.apply("out-hi", a.out_hi);
  cfg.apply("out-dir", a.out_dir);
  if (a.variant.empty())
    throw InvalidInputError("--variant is required (asymmetric or null)");

  SimDesign d;
  d.variant = parse_variant(a.variant);
  d.n_L = a.n_L;
  d.n = a.n;
  d.T = a.T;
  d.rho0 = a.rho0;
  d.pi = a.pi;
  d.in_range = {a.in_lo, a.in_hi};
  d.out_range = {a.out_lo, a.out_hi};
  d.seed = resolve_seed(sub, cfg, a.seed);
  validate_design(d);

  const Params p = generate_params(d);
  auto [data, z] = sample_data(p, d.T, d.seed);

  namespace fs = std::filesystem;
  fs::create_directories(a.out_dir);
  const fs::path dir(a.out_dir);
  write_params_json((dir / "params.json").string(), p);
  write_groups_csv((dir / "groups.csv").string(), data);
  write_labels_csv((dir / "labels.csv").string(), z, d.variant);
  std::cout << "simulated variant=" << variant_name(d.variant)
            << " n_L=" << d.n_L << " n=" << d.n << " T=" << d.T
            << " seed=" << d.seed << " -> " << dir.string() << std::endl;
  return 0;
}

struct FitArgs {
  std::string data_file;
  std::string variant = "asymmetric";
  int n_L = 0;
  int restarts = 20;
  int max_iterations = 200;
  double clamp_eps = 1e-9;
  std::uint64_t seed = 0;
  int jobs = 0;
  std::string init_labels;
  std::string out = "fit.json";
  std::string config;
};

int run_fit(CLI::App* sub, FitArgs& a) {
  ConfigLayer cfg(sub, load_config(a.config));
  cfg.apply("variant", a.variant);
  cfg.apply("nL", a.n_L);
  cfg.apply("restarts", a.restarts);
  cfg.apply("max-iterations", a.max_iterations);
  cfg.apply("clamp-eps", a.clamp_eps);
  cfg.apply("seed", a.seed);
  cfg.apply("jobs", a.jobs);
  cfg.apply("init-labels", a.init_labels);
  cfg.apply("out", a.out);
  if (a.n_L <= 0) throw InvalidInputError("--nL is required and positive");

  const GroupedData data = read_groups_csv(a.data_file);
  FitConfig fc;
  fc.variant = parse_variant(a.variant);
  fc.restarts = a.restarts;
  fc.max_iterations = a.max_iterations;
  fc.clamp_eps = a.clamp_eps;
  fc.seed = resolve_seed(sub, cfg, a.seed);
  fc.jobs = a.jobs;
  if (!a.init_labels.empty())
    fc.initial_labels =
        labels_from_external(read_labels_csv(a.init_labels), fc.variant, a.n_L);

  FitFile f;
  f.variant = fc.variant;
  f.n_L = a.n_L;
  f.n = data.n;
  f.T = data.T;
  f.fit = hard_em_fit(data, a.n_L, fc);
  write_fit_json(a.out, f, fc);
  std::cout << "fit: log profile likelihood " << f.fit.log_profile_lik << ", "
            << f.fit.iterations << " iterations, restart "
            << f.fit.restart_index << ", "
            << f.fit.mle.empty_rows.size() << " empty clusters -> " << a.out
            << std::endl;
  return 0;
}

struct EvaluateArgs {
  std::string fit_file;
  std::string groups;
  std::string params;
  std::string labels;
  std::string out = "metrics.json";
};

int run_evaluate(EvaluateArgs& a) {
  const FitFile f = read_fit_json(a.fit_file);
  const GroupedData data = read_groups_csv(a.groups);
  const Params truth = read_params_json(a.params);
  const Labels z_true =
      labels_from_external(read_labels_csv(a.labels), f.variant, f.n_L);

  if (truth.variant != f.variant)
    throw InvalidInputError("fit and params disagree on variant");
  if (truth.n_L != f.n_L || truth.n != f.n || data.n != f.n)
    throw InvalidInputError("fit, params and data disagree on shape");
  if (data.T != f.T || static_cast<int>(z_true.size()) != f.T)
    throw InvalidInputError("fit, data and labels disagree on T");

  Metrics m;
  m.variant = f.variant;
  m.n_L = f.n_L;
  m.n = f.n;
  m.T = f.T;
  m.mislabel = mislabel_fraction(f.fit.labels, z_true);
  m.rmse_value = rmse(f.fit.mle.A, truth.A);
  const MleResult ref = mle_given_labels(data, z_true, f.n_L, f.variant);
  m.rmse_star = rmse(ref.A, truth.A);
  write_metrics_json(a.out, m);
  std::cout << metrics_to_text(m);
  return 0;
}

struct ReplicateArgs {
  int table = 0;
  std::string variant;
  std::vector<std::string> cells;
  std::string T_list = "1000,1500,2000";
  int R = 100;
  int restarts = 20;
  int max_iterations = 200;
  double clamp_eps = 1e-9;
  std::uint64_t seed = 0;
  int jobs = 0;
  bool fail_fast = false;
  double rho0 = 0.2, pi = 0.05;
  double in_lo = 0.2, in_hi = 0.4, out_lo = 0.0, out_hi = 0.2;
  std::string out = "replicate";
  std::string config;
};

int run_replicate(CLI::App* sub, ReplicateArgs& a) {
  ConfigLayer cfg(sub, load_config(a.config));
  cfg.apply("table", a.table);
  cfg.apply("variant", a.variant);
  cfg.apply("cells", a.cells);
  cfg.apply("T", a.T_list);
  cfg.apply("R", a.R);
  cfg.apply("restarts", a.restarts);
  cfg.apply("max-iterations", a.max_iterations);
  cfg.apply("clamp-eps", a.clamp_eps);
  cfg.apply("seed", a.seed);
  cfg.apply("jobs", a.jobs);
  cfg.apply("fail-fast", a.fail_fast);
  cfg.apply("rho0", a.rho0);
  cfg.apply("pi", a.pi);
  cfg.apply("in-lo", a.in_lo);
  cfg.apply("in-hi", a.in_hi);
  cfg.apply("out-lo", a.out_lo);
  cfg.apply("out-hi", a.out_hi);
  cfg.apply("out", a.out);

  Variant variant;
  if (a.table == 0 && a.variant.empty())
    throw InvalidInputError("give --table 1|2 or --variant");
  if (a.table != 0 && a.table != 1 && a.table != 2)
    throw InvalidInputError("--table must be 1 or 2");
  if (a.table != 0) {
    variant = a.table == 1 ? Variant::asymmetric : Variant::null_component;
    if (!a.variant.empty() && parse_variant(a.variant) != variant)
      throw InvalidInputError("--table and --variant disagree");
  } else {
    variant = parse_variant(a.variant);
  }

  std::vector<CellSpec> grid;
  if (a.cells.empty()) {
    for (int n_L : {10, 20})
      for (int n : {100, 1000}) grid.push_back({n_L, n});
  } else {
    for (const std::string& s : a.cells) grid.push_back(parse_cell(s));
  }
  std::vector<int> Ts;
  for (const std::string& s : split(a.T_list, ','))
    Ts.push_back(parse_positive_int(s, "T"));

  const std::uint64_t master = resolve_seed(sub, cfg, a.seed);
  FitConfig fc;
  fc.restarts = a.restarts;
  fc.max_iterations = a.max_iterations;
  fc.clamp_eps = a.clamp_eps;

  std::vector<ReplicateSummary> results;
  for (const CellSpec& cell : grid) {
    for (int T : Ts) {
      SimDesign d;
      d.variant = variant;
      d.n_L = cell.n_L;
      d.n = cell.n;
      d.T = T;
      d.rho0 = a.rho0;
      d.pi = a.pi;
      d.in_range = {a.in_lo, a.in_hi};
      d.out_range = {a.out_lo, a.out_hi};
      validate_design(d);
      results.push_back(run_replicates(
          d, fc, a.R, cell_seed(master, variant, cell.n_L, cell.n, T), a.jobs,
          a.fail_fast));
      for (const std::string& err : results.back().errors)
        if (!err.empty()) std::cerr << "warning: " << err << '\n';
    }
  }

  write_replicate_csv(a.out + ".csv", results);
  write_replicate_json(a.out + ".json", results);
  std::cout << replicate_table_text(results);
  std::cout << "wrote " << a.out << ".csv and " << a.out << ".json"
            << std::endl;
  return 0;
}

struct CheckArgs {
  std::string params_file;
  std::string distinct_from;
  double tol = 1e-9;
  int cap = 14;
  std::string out = "report.json";
};

int run_check(CheckArgs& a) {
  const Params p = read_params_json(a.params_file);
  const IdentifiabilityReport rep = check_identifiability(p, a.tol);
  write_report_json(a.out, rep);
  std::cout << report_to_text(rep);
  if (!a.distinct_from.empty()) {
    const Params q = read_params_json(a.distinct_from);
    const DistinctResult res = distributions_distinct(p, q, a.tol, a.cap);
    std::cout << "distributions " << (res.distinct ? "distinct" : "equal")
              << ", max outcome gap " << res.max_gap << " at outcome "
              << res.witness << '\n';
  }
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grouped-observation hub mixture toolkit"};
  app.require_subcommand(1);

  SimulateArgs sa;
  CLI::App* sim = app.add_subcommand(
      "simulate", "draw parameters and grouped data from the study design");
  sim->add_option("--variant", sa.variant, "asymmetric or null");
  sim->add_option("--nL", sa.n_L, "number of leaders");
  sim->add_option("--n", sa.n, "number of nodes");
  sim->add_option("--T", sa.T, "number of groups");
  sim->add_option("--seed", sa.seed, "master seed");
  sim->add_option("--rho0", sa.rho0, "null variant: leaderless weight");
  sim->add_option("--pi", sa.pi, "null variant: leaderless edge probability");
  sim->add_option("--in-lo", sa.in_lo, "own-block probability lower bound");
  sim->add_option("--in-hi", sa.in_hi, "own-block probability upper bound");
  sim->add_option("--out-lo", sa.out_lo, "off-block probability lower bound");
  sim->add_option("--out-hi", sa.out_hi, "off-block probability upper bound");
  sim->add_option("--out-dir", sa.out_dir, "output directory");
  sim->add_option("--config", sa.config, "JSON config mirroring flag names");

  FitArgs fa;
  CLI::App* fit = app.add_subcommand("fit", "estimate labels and parameters");
  fit->add_option("data", fa.data_file, "groups.csv")->required();
  fit->add_option("--variant", fa.variant, "asymmetric or null");
  fit->add_option("--nL", fa.n_L, "number of leaders");
  fit->add_option("--restarts", fa.restarts, "random restarts");
  fit->add_option("--max-iterations", fa.max_iterations, "iteration cap");
  fit->add_option("--clamp-eps", fa.clamp_eps, "E-step probability clamp");
  fit->add_option("--seed", fa.seed, "master seed");
  fit->add_option("--jobs", fa.jobs, "worker threads (0: all cores)");
  fit->add_option("--init-labels", fa.init_labels,
                  "labels.csv used as a warm start instead of restarts");
  fit->add_option("--out", fa.out, "output fit JSON path");
  fit->add_option("--config", fa.config, "JSON config mirroring flag names");

  EvaluateArgs ea;
  CLI::App* ev = app.add_subcommand(
      "evaluate", "score a fit against ground truth");
  ev->add_option("fit", ea.fit_file, "fit.json")->required();
  ev->add_option("--groups", ea.groups, "groups.csv")->required();
  ev->add_option("--params", ea.params, "true params.json")->required();
  ev->add_option("--labels", ea.labels, "true labels.csv")->required();
  ev->add_option("--out", ea.out, "output metrics JSON path");

  ReplicateArgs ra;
  CLI::App* rep = app.add_subcommand(
      "replicate", "run the replicated study grid and emit summary tables");
  rep->add_option("--table", ra.table, "1: asymmetric grid, 2: null grid");
  rep->add_option("--variant", ra.variant, "asymmetric or null");
  rep->add_option("--cells", ra.cells,
                  "grid cell as nL=..,n=.. (repeatable; default full grid)");
  rep->add_option("--T", ra.T_list, "comma-separated group counts");
  rep->add_option("--R", ra.R, "replicates per cell");
  rep->add_option("--restarts", ra.restarts, "random restarts per fit");
  rep->add_option("--max-iterations", ra.max_iterations, "iteration cap");
  rep->add_option("--clamp-eps", ra.clamp_eps, "E-step probability clamp");
  rep->add_option("--seed", ra.seed, "master seed");
  rep->add_option("--jobs", ra.jobs, "worker threads (0: all cores)");
  rep->add_flag("--fail-fast", ra.fail_fast,
                "abort on the first failed replicate");
  rep->add_option("--rho0", ra.rho0, "null variant: leaderless weight");
  rep->add_option("--pi", ra.pi, "null variant: leaderless edge probability");
  rep->add_option("--in-lo", ra.in_lo, "own-block probability lower bound");
  rep->add_option("--in-hi", ra.in_hi, "own-block probability upper bound");
  rep->add_option("--out-lo", ra.out_lo, "off-block probability lower bound");
  rep->add_option("--out-hi", ra.out_hi, "off-block probability upper bound");
  rep->add_option("--out", ra.out, "output file prefix");
  rep->add_option("--config", ra.config, "JSON config mirroring flag names");

  CheckArgs ca;
  CLI::App* chk = app.add_subcommand(
      "check-identifiability", "test the sufficient conditions on parameters");
  chk->add_option("params", ca.params_file, "params.json")->required();
  chk->add_option("--distinct-from", ca.distinct_from,
                  "second params.json: also compare exact outcome "
                  "distributions by enumeration");
  chk->add_option("--tol", ca.tol, "strictness tolerance");
  chk->add_option("--cap", ca.cap, "largest n enumerated exactly");
  chk->add_option("--out", ca.out, "output report JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) return run_simulate(sim, sa);
    if (fit->parsed()) return run_fit(fit, fa);
    if (ev->parsed()) return run_evaluate(ea);
    if (rep->parsed()) return run_replicate(rep, ra);
    if (chk->parsed()) return run_check(ca);
  } catch (const InvalidInputError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  } catch (const InfeasibleInstanceError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 3;
  } catch (const EnumerationCapError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
