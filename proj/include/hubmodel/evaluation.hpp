#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hubmodel/estimator.hpp"
#include "hubmodel/simulate.hpp"
#include "hubmodel/types.hpp"

namespace hubmodel {

// Fraction of groups whose labels disagree. Direct comparison; the forced
// diagonal pins component identities, so no permutation matching.
double mislabel_fraction(const Labels& est, const Labels& truth);

// Root-mean-square error over every entry of same-shape matrices, forced
// columns included.
double rmse(const std::vector<double>& a, const std::vector<double>& b);

// Deterministic order-independent reduction.
double pairwise_sum(std::span<const double> v);

struct MetricSummary {
  double mean = 0.0;
  double sd = 0.0;
};

struct ReplicateSummary {
  SimDesign design;
  int R = 0;
  std::uint64_t seed = 0;
  std::vector<double> mislabel;   // per replicate, NaN on failure
  std::vector<double> rmse;
  std::vector<double> rmse_star;
  std::vector<std::string> errors;  // empty string when the replicate ran
  int failures = 0;
  MetricSummary mislabel_s, rmse_s, rmse_star_s;
};

// One study cell: per replicate draw fresh parameters, sample data, fit,
// and also estimate under the true labels for the reference error. All
// randomness derives from seed by replicate index, so results do not depend
// on jobs or on which other replicates run.
ReplicateSummary run_replicates(const SimDesign& design, const FitConfig& fit,
                                int R, std::uint64_t seed, int jobs,
                                bool fail_fast = false);

// Stable per-cell seed so a cell's numbers do not move when the selection
// of cells around it changes.
std::uint64_t cell_seed(std::uint64_t master, Variant variant, int n_L, int n,
                        int T);

}  // namespace hubmodel
