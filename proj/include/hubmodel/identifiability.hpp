#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "hubmodel/types.hpp"

namespace hubmodel {

// One entry of a condition report. Labels are external component labels,
// nodes are 1-based ids; unused fields stay at their sentinels.
struct ConditionWitness {
  int i = -1;
  int i_prime = -1;
  int node = -1;
  int node2 = -1;
  double value = std::numeric_limits<double>::quiet_NaN();
};

struct Condition {
  std::string id;    // "i".."iv"
  std::string what;  // plain-language statement
  bool pass = true;
  std::vector<ConditionWitness> witnesses;   // evidence when the check passes
  std::vector<ConditionWitness> violations;  // offenders when it fails
};

struct IdentifiabilityReport {
  Variant variant = Variant::asymmetric;
  double tol = 0.0;
  bool pass = false;
  std::vector<Condition> conditions;
};

// Sufficient conditions for the parameters to be the only ones producing
// their outcome distribution. The asymmetric variant checks (i) interior
// mixing weights, (ii) off-diagonal entries strictly below one, (iii) every
// leader pair separated on some follower; the null variant adds (iv) the
// leaderless profile differing from every leader row on two followers.
IdentifiabilityReport check_identifiability(const Params& p, double tol);

// Exact outcome probabilities over all 2^n subsets; entry index encodes
// presence of node j+1 in bit j.
std::vector<double> outcome_distribution(const Params& p, int cap = 14);

struct DistinctResult {
  bool distinct = false;
  double max_gap = 0.0;
  std::uint32_t witness = 0;  // outcome attaining the largest gap
};

DistinctResult distributions_distinct(const Params& p1, const Params& p2,
                                      double tol, int cap = 14);

}  // namespace hubmodel
