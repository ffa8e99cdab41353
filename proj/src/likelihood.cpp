#include "hubmodel/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hubmodel {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// x * log(y) with the 0 * log(0) = 0 convention.
double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

void check_dims(const GroupedData& g, const Labels& z, const Params& p) {
  if (p.n != g.n) throw InvalidInputError("params and data disagree on n");
  if (static_cast<int>(z.size()) != g.T)
    throw InvalidInputError("labels length does not match group count");
  validate_labels(z, p.n_L, p.variant);
}

}  // namespace

double row_log_lik(std::span<const std::uint8_t> group, const Params& p,
                   int r) {
  double s = 0.0;
  for (int j = 0; j < p.n; ++j) {
    double a = p.a(r, j);
    s += group[j] ? std::log(a) : std::log1p(-a);
    if (s == kNegInf) return kNegInf;
  }
  return s;
}

double complete_data_log_lik(const GroupedData& g, const Labels& z,
                             const Params& p) {
  check_dims(g, z, p);
  double s = 0.0;
  for (int t = 0; t < g.T; ++t) {
    s += row_log_lik({g.row(t), static_cast<std::size_t>(g.n)}, p, z[t]);
    if (s == kNegInf) return kNegInf;
  }
  return s;
}

double marginal_log_lik(const GroupedData& g, const Params& p) {
  if (p.n != g.n) throw InvalidInputError("params and data disagree on n");
  const int rows = p.rows();
  std::vector<double> lp(rows);
  double total = 0.0;
  for (int t = 0; t < g.T; ++t) {
    double best = kNegInf;
    for (int r = 0; r < rows; ++r) {
      if (p.rho[r] <= 0.0) {
        lp[r] = kNegInf;
        continue;
      }
      lp[r] = std::log(p.rho[r]) +
              row_log_lik({g.row(t), static_cast<std::size_t>(g.n)}, p, r);
      best = std::max(best, lp[r]);
    }
    if (best == kNegInf) return kNegInf;
    double acc = 0.0;
    for (int r = 0; r < rows; ++r) acc += std::exp(lp[r] - best);
    total += best + std::log(acc);
  }
  return total;
}

MleResult mle_from_tallies(const std::vector<std::int64_t>& counts,
                           const std::vector<std::int64_t>& hits, int rows,
                           int n, int T, Variant variant) {
  MleResult out;
  out.rows = rows;
  out.n = n;
  out.counts = counts;
  out.A.assign(static_cast<std::size_t>(rows) * n, 0.0);
  out.rho.assign(rows, 0.0);
  for (int r = 0; r < rows; ++r) {
    out.rho[r] = static_cast<double>(counts[r]) / T;
    double* arow = out.A.data() + static_cast<std::size_t>(r) * n;
    if (counts[r] == 0) {
      out.empty_rows.push_back(r);
      std::fill(arow, arow + n, 0.5);
      int hc = hub_column(variant, r);
      if (hc >= 0) arow[hc] = 1.0;
      continue;
    }
    const std::int64_t* acc = hits.data() + static_cast<std::size_t>(r) * n;
    for (int j = 0; j < n; ++j)
      arow[j] = static_cast<double>(acc[j]) / counts[r];
  }
  return out;
}

MleResult mle_given_labels(const GroupedData& g, const Labels& z, int n_L,
                           Variant variant) {
  if (g.T < 1) throw InvalidInputError("estimation needs at least one group");
  if (static_cast<int>(z.size()) != g.T)
    throw InvalidInputError("labels length does not match group count");
  validate_labels(z, n_L, variant);
  const int rows = variant == Variant::asymmetric ? n_L : n_L + 1;

  std::vector<std::int64_t> counts(rows, 0);
  std::vector<std::int64_t> hits(static_cast<std::size_t>(rows) * g.n, 0);
  for (int t = 0; t < g.T; ++t) {
    int r = z[t];
    ++counts[r];
    const std::uint8_t* row = g.row(t);
    std::int64_t* acc = hits.data() + static_cast<std::size_t>(r) * g.n;
    for (int j = 0; j < g.n; ++j) acc[j] += row[j];
  }
  return mle_from_tallies(counts, hits, rows, g.n, g.T, variant);
}

double profile_log_lik(const GroupedData& g, const Labels& z, int n_L,
                       Variant variant) {
  MleResult mle = mle_given_labels(g, z, n_L, variant);
  Params p;
  p.variant = variant;
  p.n_L = n_L;
  p.n = g.n;
  p.rho = mle.rho;
  p.A = std::move(mle.A);
  // The maximization runs over matrices with the forced unit entries, so an
  // infeasible assignment scores -inf rather than a finite tally value.
  for (int r = 0; r < p.rows(); ++r) {
    int hc = hub_column(variant, r);
    if (hc >= 0) p.a(r, hc) = 1.0;
  }
  double s = 0.0;
  for (int t = 0; t < g.T; ++t) {
    s += row_log_lik({g.row(t), static_cast<std::size_t>(g.n)}, p, z[t]);
    if (s == kNegInf) return kNegInf;
  }
  return s;
}

double population_profile_lik(const Labels& assign, const Labels& truth,
                              const Params& p) {
  if (assign.size() != truth.size())
    throw InvalidInputError("assignment and truth lengths differ");
  const int T = static_cast<int>(assign.size());
  if (T < 1) throw InvalidInputError("population objective needs T >= 1");
  validate_labels(assign, p.n_L, p.variant);
  validate_labels(truth, p.n_L, p.variant);
  const int rows = p.rows();

  std::vector<double> mean(static_cast<std::size_t>(rows) * p.n, 0.0);
  std::vector<int> size(rows, 0);
  for (int t = 0; t < T; ++t) {
    ++size[assign[t]];
    double* m = mean.data() + static_cast<std::size_t>(assign[t]) * p.n;
    const double* src = p.A.data() + static_cast<std::size_t>(truth[t]) * p.n;
    for (int j = 0; j < p.n; ++j) m[j] += src[j];
  }
  for (int r = 0; r < rows; ++r) {
    if (size[r] == 0) continue;
    double* m = mean.data() + static_cast<std::size_t>(r) * p.n;
    for (int j = 0; j < p.n; ++j) m[j] /= size[r];
  }

  double s = 0.0;
  for (int t = 0; t < T; ++t) {
    const double* m = mean.data() + static_cast<std::size_t>(assign[t]) * p.n;
    const double* src = p.A.data() + static_cast<std::size_t>(truth[t]) * p.n;
    for (int j = 0; j < p.n; ++j)
      s += xlogy(src[j], m[j]) + xlogy(1.0 - src[j], 1.0 - m[j]);
  }
  return s;
}

}  // namespace hubmodel
