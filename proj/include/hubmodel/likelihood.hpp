#pragma once

#include <span>
#include <vector>

#include "hubmodel/types.hpp"

namespace hubmodel {

// log P(G, z | params). Infeasible labels give -inf, never an error; only
// shape mismatches do. 0*log(0) counts as 0 throughout.
double complete_data_log_lik(const GroupedData& g, const Labels& z,
                             const Params& p);

// log of one component row's Bernoulli product for a single group.
double row_log_lik(std::span<const std::uint8_t> group, const Params& p, int r);

// log P(G | params), labels summed out per group via log-sum-exp.
double marginal_log_lik(const GroupedData& g, const Params& p);

MleResult mle_given_labels(const GroupedData& g, const Labels& z, int n_L,
                           Variant variant);

// Shared finalization so sparse and dense tallies agree bit for bit.
MleResult mle_from_tallies(const std::vector<std::int64_t>& counts,
                           const std::vector<std::int64_t>& hits, int rows,
                           int n, int T, Variant variant);

// Plug-in objective max_A log P(G, A | z) at the closed-form estimate.
double profile_log_lik(const GroupedData& g, const Labels& z, int n_L,
                       Variant variant);

// Population analogue: expected per-entry profiles under true component rows
// picked by truth, averaged within the clusters of assign.
double population_profile_lik(const Labels& assign, const Labels& truth,
                              const Params& p);

}  // namespace hubmodel
