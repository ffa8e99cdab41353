#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hubmodel/types.hpp"

namespace hubmodel {

struct FitConfig {
  Variant variant = Variant::asymmetric;
  int restarts = 20;
  int max_iterations = 200;
  double clamp_eps = 1e-9;  // E-step scoring only, estimates stay raw
  std::uint64_t seed = 0;
  int jobs = 0;             // 0: hardware concurrency
  Labels initial_labels;    // non-empty: one warm-started run, no restarts
};

// Alternating closed-form estimation and greedy reassignment. Restarts are
// scored by the exact profile log-likelihood of their final labels, ties
// going to the lowest restart index; the outcome never depends on jobs.
FitResult hard_em_fit(const GroupedData& g, int n_L, const FitConfig& cfg);

// Per-component assignment scores of one group against a membership matrix,
// off-diagonal entries clamped to [eps, 1-eps] exactly as inside the fit
// loop. Rows whose forced column the group misses score -inf.
std::vector<double> e_step_scores(std::span<const std::uint8_t> group,
                                  const std::vector<double>& A, int rows,
                                  int n, Variant variant, double clamp_eps);

inline std::vector<double> e_step_scores(std::span<const std::uint8_t> group,
                                         const MleResult& mle, Variant variant,
                                         double clamp_eps) {
  return e_step_scores(group, mle.A, mle.rows, mle.n, variant, clamp_eps);
}

}  // namespace hubmodel
