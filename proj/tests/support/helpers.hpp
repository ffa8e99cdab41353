#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "hubmodel/rng.hpp"
#include "hubmodel/simulate.hpp"
#include "hubmodel/types.hpp"

namespace testutil {

using hubmodel::GroupedData;
using hubmodel::Labels;
using hubmodel::Params;
using hubmodel::Rng;
using hubmodel::Variant;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline GroupedData make_data(const std::vector<std::vector<int>>& rows) {
  const int T = static_cast<int>(rows.size());
  const int n = T ? static_cast<int>(rows[0].size()) : 0;
  std::vector<std::uint8_t> m;
  for (const auto& r : rows)
    for (int v : r) m.push_back(static_cast<std::uint8_t>(v));
  return GroupedData(T, n, std::move(m));
}

// Valid parameters with free entries uniform in [lo, hi) and weights
// bounded away from zero.
inline Params random_params(Rng& rng, Variant variant, int n_L, int n,
                            double lo = 0.05, double hi = 0.95) {
  Params p;
  p.variant = variant;
  p.n_L = n_L;
  p.n = n;
  const int rows = p.rows();
  p.rho.resize(rows);
  double w = 0.0;
  for (int r = 0; r < rows; ++r) {
    p.rho[r] = 0.1 + rng.uniform();
    w += p.rho[r];
  }
  for (int r = 0; r < rows; ++r) p.rho[r] /= w;
  p.A.resize(static_cast<std::size_t>(rows) * n);
  for (int r = 0; r < rows; ++r) {
    const int hc = hub_column(variant, r);
    for (int j = 0; j < n; ++j)
      p.a(r, j) = j == hc ? 1.0 : rng.uniform(lo, hi);
  }
  hubmodel::validate_params(p);
  return p;
}

// Plain per-entry recomputation, deliberately using log(1-a) rather than
// the library's log1p path.
inline double oracle_group_log_lik(const std::uint8_t* g, const Params& p,
                                   int r) {
  double s = 0.0;
  for (int j = 0; j < p.n; ++j) {
    const double a = p.a(r, j);
    const double term = g[j] ? std::log(a) : std::log(1.0 - a);
    s += term;
  }
  return s;
}

// Walks every assignment that respects membership feasibility.
template <class F>
void for_each_feasible(const GroupedData& g, int n_L, Variant variant,
                       F&& fn) {
  const int T = g.T;
  std::vector<std::vector<int>> cand(T);
  for (int t = 0; t < T; ++t) {
    if (variant == Variant::null_component) cand[t].push_back(0);
    for (int c = 0; c < n_L; ++c)
      if (g(t, c))
        cand[t].push_back(variant == Variant::asymmetric ? c : c + 1);
    if (cand[t].empty()) return;  // no feasible assignment exists
  }
  Labels z(T);
  std::vector<int> pos(T, 0);
  for (int t = 0; t < T; ++t) z[t] = cand[t][0];
  while (true) {
    fn(z);
    int t = T - 1;
    while (t >= 0) {
      if (++pos[t] < static_cast<int>(cand[t].size())) {
        z[t] = cand[t][pos[t]];
        break;
      }
      pos[t] = 0;
      z[t] = cand[t][0];
      --t;
    }
    if (t < 0) return;
  }
}

// Walks every label vector in the variant's domain, feasible or not.
template <class F>
void for_each_assignment(int T, int n_L, Variant variant, F&& fn) {
  const int lo = 0;
  const int hi = variant == Variant::asymmetric ? n_L - 1 : n_L;
  Labels z(T, lo);
  while (true) {
    fn(z);
    int t = T - 1;
    while (t >= 0) {
      if (++z[t] <= hi) break;
      z[t] = lo;
      --t;
    }
    if (t < 0) return;
  }
}

}  // namespace testutil
