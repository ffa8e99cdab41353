#include "hubmodel/types.hpp"

#include <cmath>
#include <cstdio>

namespace hubmodel {

namespace {

std::string at(const char* what, int i) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s %d", what, i);
  return buf;
}

}  // namespace

std::string variant_name(Variant v) {
  return v == Variant::asymmetric ? "asymmetric" : "null";
}

Variant parse_variant(const std::string& s) {
  if (s == "asymmetric" || s == "asym") return Variant::asymmetric;
  if (s == "null" || s == "null_component" || s == "null-component")
    return Variant::null_component;
  throw InvalidInputError("unknown variant '" + s +
                          "' (expected asymmetric or null)");
}

GroupedData::GroupedData(int T_, int n_, std::vector<std::uint8_t> m_)
    : T(T_), n(n_), m(std::move(m_)) {
  if (T < 0 || n <= 0)
    throw InvalidInputError("grouped data needs n >= 1 and T >= 0");
  if (m.size() != static_cast<std::size_t>(T) * n)
    throw InvalidInputError("grouped data buffer size does not match T x n");
  for (std::uint8_t v : m)
    if (v > 1) throw InvalidInputError("grouped data entries must be 0 or 1");
}

Params make_params(Variant variant, int n_L, int n, std::vector<double> rho,
                   std::vector<double> A) {
  Params p;
  p.variant = variant;
  p.n_L = n_L;
  p.n = n;
  p.rho = std::move(rho);
  p.A = std::move(A);
  validate_params(p);
  return p;
}

void validate_params(const Params& p) {
  const int min_nL = p.variant == Variant::asymmetric ? 1 : 0;
  if (p.n_L < min_nL || p.n_L > p.n || p.n < 1)
    throw InvalidInputError("params need " + std::to_string(min_nL) +
                            " <= n_L <= n");
  const int rows = p.rows();
  if (static_cast<int>(p.rho.size()) != rows)
    throw InvalidInputError("rho has wrong length");
  if (p.A.size() != static_cast<std::size_t>(rows) * p.n)
    throw InvalidInputError("A has wrong shape");
  double sum = 0.0;
  for (int r = 0; r < rows; ++r) {
    double v = p.rho[r];
    if (!(v >= 0.0) || !(v <= 1.0))
      throw InvalidInputError("rho entry out of [0,1] at " + at("row", r));
    sum += v;
  }
  if (std::fabs(sum - 1.0) > 1e-12)
    throw InvalidInputError("rho must sum to 1 (tolerance 1e-12)");
  for (int r = 0; r < rows; ++r) {
    for (int j = 0; j < p.n; ++j) {
      double v = p.a(r, j);
      if (!(v >= 0.0) || !(v <= 1.0))
        throw InvalidInputError("A entry out of [0,1] at " + at("row", r) +
                                " " + at("col", j));
    }
    int hc = hub_column(p.variant, r);
    if (hc >= 0 && p.a(r, hc) != 1.0)
      throw InvalidInputError("forced unit entry missing at " + at("row", r));
  }
}

void validate_labels(const Labels& z, int n_L, Variant variant) {
  const int hi = variant == Variant::asymmetric ? n_L - 1 : n_L;
  for (std::size_t t = 0; t < z.size(); ++t)
    if (z[t] < 0 || z[t] > hi)
      throw InvalidInputError("label out of range at " +
                              at("group", static_cast<int>(t)));
}

std::optional<int> first_infeasible_group(const GroupedData& g, const Labels& z,
                                          Variant variant) {
  for (int t = 0; t < g.T; ++t) {
    int hc = hub_column(variant, z[t]);
    if (hc >= 0 && g(t, hc) == 0) return t;
  }
  return std::nullopt;
}

}  // namespace hubmodel
