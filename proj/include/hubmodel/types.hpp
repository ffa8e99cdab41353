#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hubmodel {

// Maps to process exit code 2.
struct InvalidInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Maps to process exit code 3. Raised when a concrete instance admits no
// feasible assignment (e.g. a group without any leader under the asymmetric
// variant).
struct InfeasibleInstanceError : std::runtime_error {
  explicit InfeasibleInstanceError(const std::string& msg, int group = -1)
      : std::runtime_error(msg), group_index(group) {}
  int group_index;  // 0-based offending group, -1 if not group specific
};

// Maps to process exit code 4. Raised when an exact-enumeration routine is
// asked to exceed its hard cap.
struct EnumerationCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Variant { asymmetric, null_component };

std::string variant_name(Variant v);
Variant parse_variant(const std::string& s);

// Binary membership matrix, T groups by n nodes, row-major.
struct GroupedData {
  int T = 0;
  int n = 0;
  std::vector<std::uint8_t> m;

  GroupedData() = default;
  GroupedData(int T_, int n_, std::vector<std::uint8_t> m_);

  std::uint8_t operator()(int t, int j) const {
    return m[static_cast<std::size_t>(t) * n + j];
  }
  const std::uint8_t* row(int t) const {
    return m.data() + static_cast<std::size_t>(t) * n;
  }
};

// Mixture parameters for either variant.
//
// Rows of A are component rows: under the asymmetric variant row r is the
// profile of leader r (0-based; leader r is node column r, and A(r,r) == 1).
// Under the null variant row 0 holds the leaderless profile pi and row r >= 1
// is the profile of leader r-1 (diagonal entry at column r-1).
struct Params {
  Variant variant = Variant::asymmetric;
  int n_L = 0;
  int n = 0;
  std::vector<double> rho;  // size rows()
  std::vector<double> A;    // row-major rows() x n

  int rows() const { return variant == Variant::asymmetric ? n_L : n_L + 1; }
  double a(int r, int j) const {
    return A[static_cast<std::size_t>(r) * n + j];
  }
  double& a(int r, int j) { return A[static_cast<std::size_t>(r) * n + j]; }
};

// Column carrying the forced unit entry of component row r, -1 for the
// leaderless row.
inline int hub_column(Variant v, int r) {
  return v == Variant::asymmetric ? r : r - 1;
}

// Internal labels are component-row indices. External label values (files,
// python, reports) are 1..n_L for the asymmetric variant and 0..n_L for the
// null variant.
inline int to_external_label(Variant v, int r) {
  return v == Variant::asymmetric ? r + 1 : r;
}
inline int to_internal_label(Variant v, int ext) {
  return v == Variant::asymmetric ? ext - 1 : ext;
}

using Labels = std::vector<std::int32_t>;

Params make_params(Variant variant, int n_L, int n, std::vector<double> rho,
                   std::vector<double> A);
void validate_params(const Params& p);

void validate_labels(const Labels& z, int n_L, Variant variant);
// First group whose label names an absent leader, if any.
std::optional<int> first_infeasible_group(const GroupedData& g, const Labels& z,
                                          Variant variant);

// Closed-form estimate under fixed labels. Rows with no assigned group are
// filled (1 at the forced column, 0.5 elsewhere) and recorded in empty_rows.
struct MleResult {
  int rows = 0;
  int n = 0;
  std::vector<double> A;           // row-major rows x n
  std::vector<double> rho;         // size rows
  std::vector<std::int64_t> counts;  // groups per row
  std::vector<std::int32_t> empty_rows;
};

struct FitResult {
  Labels labels;
  MleResult mle;
  double log_profile_lik = 0.0;
  std::vector<double> trace;  // one clamped objective value per iteration
  int restart_index = 0;
  int iterations = 0;
  bool converged = false;
};

}  // namespace hubmodel
