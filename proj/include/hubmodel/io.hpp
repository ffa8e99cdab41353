#pragma once

#include <string>
#include <vector>

#include "hubmodel/estimator.hpp"
#include "hubmodel/evaluation.hpp"
#include "hubmodel/identifiability.hpp"
#include "hubmodel/types.hpp"

namespace hubmodel {

// File formats: UTF-8, LF line endings. groups.csv has header
// node_1..node_n over 0/1 rows; labels.csv a single external-label column
// z; params.json carries {variant, n_L, n, rho, A} with A row 0 holding the
// leaderless profile under the null variant.

Params read_params_json(const std::string& path);
void write_params_json(const std::string& path, const Params& p);

GroupedData read_groups_csv(const std::string& path);
void write_groups_csv(const std::string& path, const GroupedData& g);

std::vector<int> read_labels_csv(const std::string& path);  // external values
void write_labels_csv(const std::string& path, const Labels& z,
                      Variant variant);

// External-to-internal conversion with domain checks.
Labels labels_from_external(const std::vector<int>& ext, Variant variant,
                            int n_L);

struct FitFile {
  Variant variant = Variant::asymmetric;
  int n_L = 0;
  int n = 0;
  int T = 0;
  FitResult fit;
};

void write_fit_json(const std::string& path, const FitFile& f,
                    const FitConfig& cfg);
FitFile read_fit_json(const std::string& path);

struct Metrics {
  Variant variant = Variant::asymmetric;
  int n_L = 0;
  int n = 0;
  int T = 0;
  double mislabel = 0.0;
  double rmse_value = 0.0;
  double rmse_star = 0.0;
};

void write_metrics_json(const std::string& path, const Metrics& m);
std::string metrics_to_text(const Metrics& m);

void write_replicate_csv(const std::string& path,
                         const std::vector<ReplicateSummary>& cells);
void write_replicate_json(const std::string& path,
                          const std::vector<ReplicateSummary>& cells);
// Table layout used on stdout: mean with the standard deviation scaled by
// 1e4 in parentheses.
std::string replicate_table_text(const std::vector<ReplicateSummary>& cells);

void write_report_json(const std::string& path,
                       const IdentifiabilityReport& rep);
std::string report_to_text(const IdentifiabilityReport& rep);

}  // namespace hubmodel
