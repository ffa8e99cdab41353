#pragma once

#include <cstdint>
#include <utility>

#include "hubmodel/types.hpp"

namespace hubmodel {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

// Synthetic-study design. Followers are split into n_L contiguous blocks,
// one per leader; a leader's edge probabilities are drawn from in_range
// inside its own block and from out_range everywhere else.
struct SimDesign {
  Variant variant = Variant::asymmetric;
  int n_L = 0;
  int n = 0;
  int T = 0;
  double rho0 = 0.2;      // null variant: weight of the leaderless component
  double pi = 0.05;       // null variant: constant leaderless edge probability
  Range in_range{0.2, 0.4};
  Range out_range{0.0, 0.2};
  std::uint64_t seed = 0;
};

void validate_design(const SimDesign& d);

// Block owning 0-based follower f (0 <= f < n - n_L). Sizes differ by at
// most one; larger blocks come first.
int follower_block(int n_L, int n, int f);

Params generate_params(const SimDesign& d);

// Draws T groups; returns the membership matrix and the true internal labels.
std::pair<GroupedData, Labels> sample_data(const Params& p, int T,
                                           std::uint64_t seed);

}  // namespace hubmodel
