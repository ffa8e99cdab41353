// Python surface of the library. Parameters travel as plain dicts, labels
// use the external convention, matrices are numpy arrays.
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hubmodel/estimator.hpp"
#include "hubmodel/evaluation.hpp"
#include "hubmodel/identifiability.hpp"
#include "hubmodel/io.hpp"
#include "hubmodel/likelihood.hpp"
#include "hubmodel/simulate.hpp"
#include "hubmodel/types.hpp"

namespace py = pybind11;
using namespace hubmodel;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

py::array_t<double> vector_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::array_t<double> matrix_array(const std::vector<double>& v, int rows,
                                 int cols) {
  py::array_t<double> out(
      {static_cast<py::ssize_t>(rows), static_cast<py::ssize_t>(cols)});
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::array_t<std::int32_t> external_labels_array(const Labels& z, Variant v) {
  py::array_t<std::int32_t> out(static_cast<py::ssize_t>(z.size()));
  std::int32_t* dst = out.mutable_data();
  for (std::size_t t = 0; t < z.size(); ++t)
    dst[t] = to_external_label(v, z[t]);
  return out;
}

GroupedData groups_from(const py::object& obj) {
  const auto arr = obj.cast<DoubleArray>();
  if (arr.ndim() != 2)
    throw InvalidInputError("groups must be a 2-d array of 0/1 entries");
  const int T = static_cast<int>(arr.shape(0));
  const int n = static_cast<int>(arr.shape(1));
  std::vector<std::uint8_t> m(static_cast<std::size_t>(T) * n);
  const double* src = arr.data();
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (src[k] != 0.0 && src[k] != 1.0)
      throw InvalidInputError("groups entries must be 0 or 1");
    m[k] = src[k] == 1.0 ? 1 : 0;
  }
  return GroupedData(T, n, std::move(m));
}

Labels labels_from(const py::object& obj, Variant v, int n_L) {
  return labels_from_external(obj.cast<std::vector<int>>(), v, n_L);
}

py::dict params_dict(const Params& p) {
  py::dict d;
  d["variant"] = variant_name(p.variant);
  d["n_L"] = p.n_L;
  d["n"] = p.n;
  d["rho"] = vector_array(p.rho);
  d["A"] = matrix_array(p.A, p.rows(), p.n);
  return d;
}

Params params_from(const py::dict& d) {
  for (const char* key : {"variant", "n_L", "n", "rho", "A"})
    if (!d.contains(key))
      throw InvalidInputError(std::string("params dict is missing '") + key +
                              "'");
  const Variant v = parse_variant(d["variant"].cast<std::string>());
  const int n_L = d["n_L"].cast<int>();
  const int n = d["n"].cast<int>();
  auto rho = d["rho"].cast<std::vector<double>>();
  const auto a = d["A"].cast<DoubleArray>();
  std::vector<double> flat(a.data(), a.data() + a.size());
  return make_params(v, n_L, n, std::move(rho), std::move(flat));
}

py::dict fit_dict(const FitResult& f, Variant v) {
  py::dict d;
  d["labels"] = external_labels_array(f.labels, v);
  d["A"] = matrix_array(f.mle.A, f.mle.rows, f.mle.n);
  d["rho"] = vector_array(f.mle.rho);
  d["counts"] = f.mle.counts;
  py::list empty;
  for (std::int32_t r : f.mle.empty_rows) empty.append(to_external_label(v, r));
  d["empty_components"] = empty;
  d["log_profile_lik"] = f.log_profile_lik;
  d["trace"] = vector_array(f.trace);
  d["restart_index"] = f.restart_index;
  d["iterations"] = f.iterations;
  d["converged"] = f.converged;
  return d;
}

py::dict witness_dict(const ConditionWitness& w) {
  py::dict d;
  d["i"] = w.i;
  d["i_prime"] = w.i_prime;
  d["node"] = w.node;
  d["node2"] = w.node2;
  d["value"] = w.value;
  return d;
}

py::dict report_dict(const IdentifiabilityReport& rep) {
  py::dict d;
  d["variant"] = variant_name(rep.variant);
  d["tol"] = rep.tol;
  d["pass"] = rep.pass;
  py::list conditions;
  for (const Condition& c : rep.conditions) {
    py::dict cd;
    cd["id"] = c.id;
    cd["what"] = c.what;
    cd["pass"] = c.pass;
    py::list wit, vio;
    for (const ConditionWitness& w : c.witnesses) wit.append(witness_dict(w));
    for (const ConditionWitness& w : c.violations) vio.append(witness_dict(w));
    cd["witnesses"] = wit;
    cd["violations"] = vio;
    conditions.append(cd);
  }
  d["conditions"] = conditions;
  return d;
}

py::dict summary_dict(const MetricSummary& s) {
  py::dict d;
  d["mean"] = s.mean;
  d["sd"] = s.sd;
  return d;
}

SimDesign design_from(const std::string& variant, int n_L, int n, int T,
                      double rho0, double pi, std::pair<double, double> in_range,
                      std::pair<double, double> out_range,
                      std::uint64_t seed) {
  SimDesign d;
  d.variant = parse_variant(variant);
  d.n_L = n_L;
  d.n = n;
  d.T = T;
  d.rho0 = rho0;
  d.pi = pi;
  d.in_range = {in_range.first, in_range.second};
  d.out_range = {out_range.first, out_range.second};
  d.seed = seed;
  validate_design(d);
  return d;
}

}  // namespace

PYBIND11_MODULE(_hubmodel, m) {
  m.doc() = "hub-and-spoke mixture model for grouped binary data";

  py::register_exception<InvalidInputError>(m, "InvalidInputError",
                                            PyExc_ValueError);
  py::register_exception<InfeasibleInstanceError>(m, "InfeasibleInstanceError",
                                                  PyExc_RuntimeError);
  py::register_exception<EnumerationCapError>(m, "EnumerationCapError",
                                              PyExc_RuntimeError);

  m.def(
      "simulate",
      [](const std::string& variant, int n_L, int n, int T, std::uint64_t seed,
         double rho0, double pi, std::pair<double, double> in_range,
         std::pair<double, double> out_range) {
        const SimDesign d = design_from(variant, n_L, n, T, rho0, pi, in_range,
                                        out_range, seed);
        const Params p = generate_params(d);
        auto [data, z] = sample_data(p, d.T, d.seed);
        py::dict out;
        out["params"] = params_dict(p);
        py::array_t<std::uint8_t> groups(
            {static_cast<py::ssize_t>(data.T), static_cast<py::ssize_t>(data.n)});
        std::copy(data.m.begin(), data.m.end(), groups.mutable_data());
        out["groups"] = groups;
        out["labels"] = external_labels_array(z, d.variant);
        return out;
      },
      py::arg("variant"), py::arg("n_L"), py::arg("n"), py::arg("T"),
      py::arg("seed") = 0, py::arg("rho0") = 0.2, py::arg("pi") = 0.05,
      py::arg("in_range") = std::pair<double, double>{0.2, 0.4},
      py::arg("out_range") = std::pair<double, double>{0.0, 0.2},
      "Draw design parameters and a grouped-data sample; returns params, "
      "groups, and true labels.");

  m.def(
      "fit",
      [](const py::object& groups, int n_L, const std::string& variant,
         int restarts, int max_iterations, double clamp_eps,
         std::uint64_t seed, int jobs, const py::object& initial_labels) {
        const GroupedData g = groups_from(groups);
        FitConfig cfg;
        cfg.variant = parse_variant(variant);
        cfg.restarts = restarts;
        cfg.max_iterations = max_iterations;
        cfg.clamp_eps = clamp_eps;
        cfg.seed = seed;
        cfg.jobs = jobs;
        if (!initial_labels.is_none())
          cfg.initial_labels = labels_from(initial_labels, cfg.variant, n_L);
        return fit_dict(hard_em_fit(g, n_L, cfg), cfg.variant);
      },
      py::arg("groups"), py::arg("n_L"), py::arg("variant") = "asymmetric",
      py::arg("restarts") = 20, py::arg("max_iterations") = 200,
      py::arg("clamp_eps") = 1e-9, py::arg("seed") = 0, py::arg("jobs") = 0,
      py::arg("initial_labels") = py::none(),
      "Hard EM fit; labels in the result use the external convention.");

  m.def(
      "profile_log_lik",
      [](const py::object& groups, const py::object& labels, int n_L,
         const std::string& variant) {
        const Variant v = parse_variant(variant);
        return profile_log_lik(groups_from(groups), labels_from(labels, v, n_L),
                               n_L, v);
      },
      py::arg("groups"), py::arg("labels"), py::arg("n_L"),
      py::arg("variant") = "asymmetric");

  m.def(
      "complete_data_log_lik",
      [](const py::object& groups, const py::object& labels,
         const py::dict& params) {
        const Params p = params_from(params);
        return complete_data_log_lik(groups_from(groups),
                                     labels_from(labels, p.variant, p.n_L), p);
      },
      py::arg("groups"), py::arg("labels"), py::arg("params"));

  m.def(
      "marginal_log_lik",
      [](const py::object& groups, const py::dict& params) {
        return marginal_log_lik(groups_from(groups), params_from(params));
      },
      py::arg("groups"), py::arg("params"));

  m.def(
      "mislabel_fraction",
      [](const std::vector<std::int32_t>& est,
         const std::vector<std::int32_t>& truth) {
        return mislabel_fraction(est, truth);
      },
      py::arg("est"), py::arg("truth"),
      "Fraction of positions whose labels differ; conventions cancel, so "
      "pass both sides in the same one.");

  m.def(
      "rmse",
      [](const py::object& a, const py::object& b) {
        const auto x = a.cast<DoubleArray>();
        const auto y = b.cast<DoubleArray>();
        return rmse(std::vector<double>(x.data(), x.data() + x.size()),
                    std::vector<double>(y.data(), y.data() + y.size()));
      },
      py::arg("a"), py::arg("b"),
      "Entrywise root-mean-square difference of equally shaped arrays.");

  m.def(
      "check_identifiability",
      [](const py::dict& params, double tol) {
        return report_dict(check_identifiability(params_from(params), tol));
      },
      py::arg("params"), py::arg("tol") = 1e-9);

  m.def(
      "outcome_distribution",
      [](const py::dict& params, int cap) {
        return vector_array(outcome_distribution(params_from(params), cap));
      },
      py::arg("params"), py::arg("cap") = 14,
      "Exact outcome probabilities indexed by presence bitmask.");

  m.def(
      "distributions_distinct",
      [](const py::dict& p1, const py::dict& p2, double tol, int cap) {
        const DistinctResult r =
            distributions_distinct(params_from(p1), params_from(p2), tol, cap);
        py::dict d;
        d["distinct"] = r.distinct;
        d["max_gap"] = r.max_gap;
        d["witness"] = r.witness;
        return d;
      },
      py::arg("p1"), py::arg("p2"), py::arg("tol") = 1e-9,
      py::arg("cap") = 14);

  m.def(
      "run_replicates",
      [](const std::string& variant, int n_L, int n, int T, int R,
         std::uint64_t seed, int restarts, int jobs, double rho0, double pi,
         std::pair<double, double> in_range,
         std::pair<double, double> out_range, bool fail_fast) {
        const SimDesign d =
            design_from(variant, n_L, n, T, rho0, pi, in_range, out_range, 0);
        FitConfig cfg;
        cfg.variant = d.variant;
        cfg.restarts = restarts;
        const ReplicateSummary s =
            run_replicates(d, cfg, R, seed, jobs, fail_fast);
        py::dict out;
        out["variant"] = variant_name(d.variant);
        out["n_L"] = n_L;
        out["n"] = n;
        out["T"] = T;
        out["R"] = s.R;
        out["seed"] = s.seed;
        out["mislabel"] = vector_array(s.mislabel);
        out["rmse"] = vector_array(s.rmse);
        out["rmse_star"] = vector_array(s.rmse_star);
        out["errors"] = s.errors;
        out["failures"] = s.failures;
        py::dict summary;
        summary["mislabel"] = summary_dict(s.mislabel_s);
        summary["rmse"] = summary_dict(s.rmse_s);
        summary["rmse_star"] = summary_dict(s.rmse_star_s);
        out["summary"] = summary;
        return out;
      },
      py::arg("variant"), py::arg("n_L"), py::arg("n"), py::arg("T"),
      py::arg("R"), py::arg("seed") = 0, py::arg("restarts") = 20,
      py::arg("jobs") = 0, py::arg("rho0") = 0.2, py::arg("pi") = 0.05,
      py::arg("in_range") = std::pair<double, double>{0.2, 0.4},
      py::arg("out_range") = std::pair<double, double>{0.0, 0.2},
      py::arg("fail_fast") = false,
      "Replicated study cell: fresh parameters and data each replicate, "
      "fitted and scored against the truth.");
}
