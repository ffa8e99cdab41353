#include "hubmodel/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace hubmodel {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInputError(path + ": " + e.what());
  }
}

void dump_json(const std::string& path, const ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInputError("cannot write " + path);
  out << j.dump(2) << '\n';
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

json matrix_to_json(const std::vector<double>& flat, int rows, int n) {
  json out = json::array();
  for (int r = 0; r < rows; ++r) {
    json row = json::array();
    for (int j = 0; j < n; ++j)
      row.push_back(flat[static_cast<std::size_t>(r) * n + j]);
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<double> matrix_from_json(const json& jm, int rows, int n,
                                     const std::string& where) {
  if (!jm.is_array() || static_cast<int>(jm.size()) != rows)
    throw InvalidInputError(where + ": A must have " + std::to_string(rows) +
                            " rows");
  std::vector<double> flat(static_cast<std::size_t>(rows) * n);
  for (int r = 0; r < rows; ++r) {
    const json& row = jm[r];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw InvalidInputError(where + ": A row " + std::to_string(r) +
                              " must have " + std::to_string(n) + " entries");
    for (int j = 0; j < n; ++j)
      flat[static_cast<std::size_t>(r) * n + j] = row[j].get<double>();
  }
  return flat;
}

ordered_json witness_to_json(const ConditionWitness& w) {
  ordered_json j = ordered_json::object();
  if (w.i >= 0) j["i"] = w.i;
  if (w.i_prime >= 0) j["i_prime"] = w.i_prime;
  if (w.node >= 0) j["node"] = w.node;
  if (w.node2 >= 0) j["node2"] = w.node2;
  if (!std::isnan(w.value)) j["value"] = w.value;
  return j;
}

}  // namespace

Params read_params_json(const std::string& path) {
  const json j = load_json(path);
  try {
    const Variant variant = parse_variant(j.at("variant").get<std::string>());
    const int n_L = j.at("n_L").get<int>();
    const int n = j.at("n").get<int>();
    const int rows = variant == Variant::asymmetric ? n_L : n_L + 1;
    std::vector<double> rho = j.at("rho").get<std::vector<double>>();
    std::vector<double> A = matrix_from_json(j.at("A"), rows, n, path);
    return make_params(variant, n_L, n, std::move(rho), std::move(A));
  } catch (const json::exception& e) {
    throw InvalidInputError(path + ": " + e.what());
  }
}

void write_params_json(const std::string& path, const Params& p) {
  validate_params(p);
  ordered_json j;
  j["variant"] = variant_name(p.variant);
  j["n_L"] = p.n_L;
  j["n"] = p.n;
  j["rho"] = p.rho;
  j["A"] = matrix_to_json(p.A, p.rows(), p.n);
  dump_json(path, j);
}

GroupedData read_groups_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot open " + path);
  std::string line;
  if (!read_line(in, line))
    throw InvalidInputError(path + ": missing header line");
  const std::vector<std::string> head = split_line(line);
  const int n = static_cast<int>(head.size());
  for (int j = 0; j < n; ++j)
    if (head[j] != "node_" + std::to_string(j + 1))
      throw InvalidInputError(path + ": header column " + std::to_string(j + 1) +
                              " must be node_" + std::to_string(j + 1));

  std::vector<std::uint8_t> m;
  int lineno = 1;
  while (read_line(in, line)) {
    ++lineno;
    if (line.empty() && in.peek() == std::istream::traits_type::eof()) break;
    const std::vector<std::string> cells = split_line(line);
    if (static_cast<int>(cells.size()) != n)
      throw InvalidInputError(path + ": line " + std::to_string(lineno) +
                              ": expected " + std::to_string(n) +
                              " entries, found " +
                              std::to_string(cells.size()));
    for (const std::string& c : cells) {
      if (c == "0")
        m.push_back(0);
      else if (c == "1")
        m.push_back(1);
      else
        throw InvalidInputError(path + ": line " + std::to_string(lineno) +
                                ": entry '" + c + "' is not 0 or 1");
    }
  }
  const int T = static_cast<int>(m.size()) / n;
  return GroupedData(T, n, std::move(m));
}

void write_groups_csv(const std::string& path, const GroupedData& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInputError("cannot write " + path);
  for (int j = 0; j < g.n; ++j)
    out << (j ? "," : "") << "node_" << (j + 1);
  out << '\n';
  for (int t = 0; t < g.T; ++t) {
    const std::uint8_t* row = g.row(t);
    for (int j = 0; j < g.n; ++j) {
      if (j) out << ',';
      out << (row[j] ? '1' : '0');
    }
    out << '\n';
  }
}

std::vector<int> read_labels_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot open " + path);
  std::string line;
  if (!read_line(in, line) || line != "z")
    throw InvalidInputError(path + ": header must be a single column z");
  std::vector<int> out;
  int lineno = 1;
  while (read_line(in, line)) {
    ++lineno;
    if (line.empty() && in.peek() == std::istream::traits_type::eof()) break;
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(line, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != line.size())
      throw InvalidInputError(path + ": line " + std::to_string(lineno) +
                              ": entry '" + line + "' is not an integer");
    out.push_back(v);
  }
  return out;
}

void write_labels_csv(const std::string& path, const Labels& z,
                      Variant variant) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInputError("cannot write " + path);
  out << "z\n";
  for (std::int32_t r : z) out << to_external_label(variant, r) << '\n';
}

Labels labels_from_external(const std::vector<int>& ext, Variant variant,
                            int n_L) {
  Labels z(ext.size());
  const int lo = variant == Variant::asymmetric ? 1 : 0;
  for (std::size_t t = 0; t < ext.size(); ++t) {
    if (ext[t] < lo || ext[t] > n_L)
      throw InvalidInputError(
          "label " + std::to_string(ext[t]) + " at row " + std::to_string(t) +
          " outside " + std::to_string(lo) + ".." + std::to_string(n_L));
    z[t] = to_internal_label(variant, ext[t]);
  }
  return z;
}

void write_fit_json(const std::string& path, const FitFile& f,
                    const FitConfig& cfg) {
  ordered_json j;
  j["variant"] = variant_name(f.variant);
  j["n_L"] = f.n_L;
  j["n"] = f.n;
  j["T"] = f.T;
  std::vector<int> ext(f.fit.labels.size());
  for (std::size_t t = 0; t < ext.size(); ++t)
    ext[t] = to_external_label(f.variant, f.fit.labels[t]);
  j["labels"] = ext;
  j["A_hat"] = matrix_to_json(f.fit.mle.A, f.fit.mle.rows, f.fit.mle.n);
  j["rho_hat"] = f.fit.mle.rho;
  j["cluster_sizes"] = f.fit.mle.counts;
  std::vector<int> empty_ext;
  for (std::int32_t r : f.fit.mle.empty_rows)
    empty_ext.push_back(to_external_label(f.variant, r));
  j["empty_clusters"] = empty_ext;
  j["log_profile_lik"] = f.fit.log_profile_lik;
  j["trace"] = f.fit.trace;
  j["restart_index"] = f.fit.restart_index;
  j["iterations"] = f.fit.iterations;
  j["converged"] = f.fit.converged;
  j["restarts"] = cfg.restarts;
  j["max_iterations"] = cfg.max_iterations;
  j["clamp_eps"] = cfg.clamp_eps;
  j["seed"] = cfg.seed;
  dump_json(path, j);
}

FitFile read_fit_json(const std::string& path) {
  const json j = load_json(path);
  FitFile f;
  try {
    f.variant = parse_variant(j.at("variant").get<std::string>());
    f.n_L = j.at("n_L").get<int>();
    f.n = j.at("n").get<int>();
    f.T = j.at("T").get<int>();
    const std::vector<int> ext = j.at("labels").get<std::vector<int>>();
    f.fit.labels = labels_from_external(ext, f.variant, f.n_L);
    const int rows = f.variant == Variant::asymmetric ? f.n_L : f.n_L + 1;
    f.fit.mle.rows = rows;
    f.fit.mle.n = f.n;
    f.fit.mle.A = matrix_from_json(j.at("A_hat"), rows, f.n, path);
    f.fit.mle.rho = j.at("rho_hat").get<std::vector<double>>();
    if (j.contains("cluster_sizes"))
      f.fit.mle.counts = j.at("cluster_sizes").get<std::vector<std::int64_t>>();
    if (j.contains("empty_clusters"))
      for (int e : j.at("empty_clusters").get<std::vector<int>>())
        f.fit.mle.empty_rows.push_back(to_internal_label(f.variant, e));
    f.fit.log_profile_lik = j.at("log_profile_lik").get<double>();
    f.fit.trace = j.at("trace").get<std::vector<double>>();
    f.fit.restart_index = j.at("restart_index").get<int>();
    f.fit.iterations = j.at("iterations").get<int>();
    f.fit.converged = j.value("converged", true);
  } catch (const json::exception& e) {
    throw InvalidInputError(path + ": " + e.what());
  }
  return f;
}

void write_metrics_json(const std::string& path, const Metrics& m) {
  ordered_json j;
  j["variant"] = variant_name(m.variant);
  j["n_L"] = m.n_L;
  j["n"] = m.n;
  j["T"] = m.T;
  j["mislabel_fraction"] = m.mislabel;
  j["rmse"] = m.rmse_value;
  j["rmse_star"] = m.rmse_star;
  j["rmse_includes_diagonal"] = true;
  j["rmse_includes_null_row"] = m.variant == Variant::null_component;
  dump_json(path, j);
}

std::string metrics_to_text(const Metrics& m) {
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "mislabel fraction %.6f\nrmse %.6f\nrmse* %.6f\n", m.mislabel,
                m.rmse_value, m.rmse_star);
  return buf;
}

void write_replicate_csv(const std::string& path,
                         const std::vector<ReplicateSummary>& cells) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInputError("cannot write " + path);
  out << "variant,n_L,n,T,mislabel_mean,mislabel_sd,rmse_mean,rmse_sd,"
         "rmse_star_mean,rmse_star_sd,R,seed\n";
  for (const auto& c : cells) {
    out << variant_name(c.design.variant) << ',' << c.design.n_L << ','
        << c.design.n << ',' << c.design.T << ',' << fmt(c.mislabel_s.mean)
        << ',' << fmt(c.mislabel_s.sd) << ',' << fmt(c.rmse_s.mean) << ','
        << fmt(c.rmse_s.sd) << ',' << fmt(c.rmse_star_s.mean) << ','
        << fmt(c.rmse_star_s.sd) << ',' << c.R << ',' << c.seed << '\n';
  }
}

void write_replicate_json(const std::string& path,
                          const std::vector<ReplicateSummary>& cells) {
  ordered_json arr = ordered_json::array();
  for (const auto& c : cells) {
    ordered_json j;
    j["variant"] = variant_name(c.design.variant);
    j["n_L"] = c.design.n_L;
    j["n"] = c.design.n;
    j["T"] = c.design.T;
    j["R"] = c.R;
    j["seed"] = c.seed;
    j["failures"] = c.failures;
    j["mislabel"] = {{"mean", c.mislabel_s.mean}, {"sd", c.mislabel_s.sd}};
    j["rmse"] = {{"mean", c.rmse_s.mean}, {"sd", c.rmse_s.sd}};
    j["rmse_star"] = {{"mean", c.rmse_star_s.mean}, {"sd", c.rmse_star_s.sd}};
    j["rmse_includes_diagonal"] = true;
    j["rmse_includes_null_row"] =
        c.design.variant == Variant::null_component;
    arr.push_back(std::move(j));
  }
  dump_json(path, arr);
}

std::string replicate_table_text(const std::vector<ReplicateSummary>& cells) {
  std::ostringstream out;
  out << "variant      n_L     n     T   mislabel        rmse        rmse*\n";
  char buf[160];
  for (const auto& c : cells) {
    std::snprintf(buf, sizeof(buf),
                  "%-10s %4d %5d %5d  %.4f (%3.0f)  %.4f (%2.0f)  %.4f (%2.0f)\n",
                  variant_name(c.design.variant).c_str(), c.design.n_L,
                  c.design.n, c.design.T, c.mislabel_s.mean,
                  c.mislabel_s.sd * 1e4, c.rmse_s.mean, c.rmse_s.sd * 1e4,
                  c.rmse_star_s.mean, c.rmse_star_s.sd * 1e4);
    out << buf;
  }
  return out.str();
}

void write_report_json(const std::string& path,
                       const IdentifiabilityReport& rep) {
  ordered_json j;
  j["variant"] = variant_name(rep.variant);
  j["tol"] = rep.tol;
  j["pass"] = rep.pass;
  ordered_json conds = ordered_json::array();
  for (const auto& c : rep.conditions) {
    ordered_json cj;
    cj["id"] = c.id;
    cj["what"] = c.what;
    cj["pass"] = c.pass;
    ordered_json ws = ordered_json::array();
    for (const auto& w : c.witnesses) ws.push_back(witness_to_json(w));
    cj["witnesses"] = std::move(ws);
    ordered_json vs = ordered_json::array();
    for (const auto& w : c.violations) vs.push_back(witness_to_json(w));
    cj["violations"] = std::move(vs);
    conds.push_back(std::move(cj));
  }
  j["conditions"] = std::move(conds);
  dump_json(path, j);
}

std::string report_to_text(const IdentifiabilityReport& rep) {
  std::ostringstream out;
  out << "variant " << variant_name(rep.variant) << ", tol " << rep.tol
      << ": " << (rep.pass ? "PASS" : "FAIL") << '\n';
  for (const auto& c : rep.conditions) {
    out << "  (" << c.id << ") " << c.what << ": "
        << (c.pass ? "pass" : "FAIL") << '\n';
    for (const auto& v : c.violations) {
      out << "      offending";
      if (v.i >= 0) out << " label " << v.i;
      if (v.i_prime >= 0) out << " vs " << v.i_prime;
      if (v.node >= 0) out << " node " << v.node;
      if (!std::isnan(v.value)) out << " value " << v.value;
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace hubmodel
