#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "hubmodel/evaluation.hpp"
#include "support/helpers.hpp"

using namespace hubmodel;

namespace {

SimDesign study(Variant v = Variant::asymmetric) {
  SimDesign d;
  d.variant = v;
  d.n_L = 2;
  d.n = 6;
  d.T = 30;
  return d;
}

}  // namespace

TEST_CASE("mislabel fraction counts direct disagreements") {
  CHECK(mislabel_fraction({0, 1, 1, 0}, {0, 1, 0, 0}) == 0.25);
  CHECK(mislabel_fraction({2, 2}, {2, 2}) == 0.0);
  CHECK(mislabel_fraction({0, 1}, {1, 0}) == 1.0);
  CHECK_THROWS_AS(mislabel_fraction({0}, {0, 1}), InvalidInputError);
  CHECK_THROWS_AS(mislabel_fraction({}, {}), InvalidInputError);
}

TEST_CASE("rmse on pinned cases") {
  CHECK(rmse({0.3, 0.5}, {0.5, 0.5}) ==
        doctest::Approx(std::sqrt(0.02)).epsilon(1e-15));
  CHECK(rmse({1, 0, 1}, {1, 0, 1}) == 0.0);
  CHECK_THROWS_AS(rmse({1.0}, {1.0, 2.0}), InvalidInputError);
  CHECK_THROWS_AS(rmse({}, {}), InvalidInputError);
}

TEST_CASE("pairwise sum equals plain accumulation") {
  Rng rng(2718);
  for (int size : {1, 5, 8, 9, 17, 64, 100, 1001}) {
    std::vector<double> v(size);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    const double want = std::accumulate(v.begin(), v.end(), 0.0);
    CHECK(pairwise_sum(v) == doctest::Approx(want).epsilon(1e-12));
  }
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("cell seeds separate cells and stay put") {
  const std::uint64_t a = cell_seed(9, Variant::asymmetric, 10, 100, 1000);
  CHECK(a == cell_seed(9, Variant::asymmetric, 10, 100, 1000));
  CHECK(a != cell_seed(9, Variant::null_component, 10, 100, 1000));
  CHECK(a != cell_seed(9, Variant::asymmetric, 20, 100, 1000));
  CHECK(a != cell_seed(9, Variant::asymmetric, 10, 200, 1000));
  CHECK(a != cell_seed(9, Variant::asymmetric, 10, 100, 2000));
  CHECK(a != cell_seed(10, Variant::asymmetric, 10, 100, 1000));
}

TEST_CASE("replicate runs produce finite metrics and sane summaries") {
  FitConfig fc;
  const ReplicateSummary s = run_replicates(study(), fc, 4, 9, 1);
  CHECK(s.R == 4);
  CHECK(s.failures == 0);
  for (int r = 0; r < 4; ++r) {
    CHECK(s.errors[r].empty());
    CHECK(s.mislabel[r] >= 0.0);
    CHECK(s.mislabel[r] <= 1.0);
    CHECK(s.rmse[r] >= 0.0);
    CHECK(s.rmse_star[r] >= 0.0);
  }
  CHECK(s.mislabel_s.mean ==
        doctest::Approx(std::accumulate(s.mislabel.begin(), s.mislabel.end(),
                                        0.0) /
                        4.0)
            .epsilon(1e-12));
  CHECK(s.mislabel_s.sd >= 0.0);

  const ReplicateSummary one = run_replicates(study(), fc, 1, 9, 1);
  CHECK(one.mislabel_s.sd == 0.0);

  CHECK_THROWS_AS(run_replicates(study(), fc, 0, 9, 1), InvalidInputError);
}

TEST_CASE("replicates are independent of worker count and of each other") {
  FitConfig fc;
  const ReplicateSummary a = run_replicates(study(), fc, 5, 77, 1);
  const ReplicateSummary b = run_replicates(study(), fc, 5, 77, 3);
  CHECK(a.mislabel == b.mislabel);
  CHECK(a.rmse == b.rmse);
  CHECK(a.rmse_star == b.rmse_star);
  CHECK(a.mislabel_s.mean == b.mislabel_s.mean);
  CHECK(a.rmse_s.sd == b.rmse_s.sd);

  // a shorter run reproduces the leading replicates exactly
  const ReplicateSummary c = run_replicates(study(), fc, 3, 77, 1);
  for (int r = 0; r < 3; ++r) {
    CHECK(c.mislabel[r] == a.mislabel[r]);
    CHECK(c.rmse[r] == a.rmse[r]);
  }
}

TEST_CASE("near-deterministic designs are recovered") {
  SimDesign d = study(Variant::asymmetric);
  d.T = 40;
  d.in_range = {0.95, 1.0};
  d.out_range = {0.0, 0.05};
  FitConfig fc;
  const ReplicateSummary s = run_replicates(d, fc, 3, 11, 1);
  CHECK(s.failures == 0);
  CHECK(s.mislabel_s.mean <= 0.05);
  CHECK(s.rmse_s.mean < 0.1);
  CHECK(s.rmse_star_s.mean < 0.1);
  // perfect label recovery makes both errors the same tally
  for (int r = 0; r < 3; ++r)
    if (s.mislabel[r] == 0.0) CHECK(s.rmse[r] == s.rmse_star[r]);
}

TEST_CASE("failed replicates are reported or rethrown") {
  FitConfig broken;
  broken.restarts = 0;

  const ReplicateSummary s = run_replicates(study(), broken, 3, 5, 1);
  CHECK(s.failures == 3);
  for (int r = 0; r < 3; ++r) {
    CHECK(s.errors[r] ==
          "replicate " + std::to_string(r) + ": restarts must be >= 1");
    CHECK(std::isnan(s.mislabel[r]));
  }
  CHECK(std::isnan(s.mislabel_s.mean));
  CHECK(std::isnan(s.rmse_s.sd));

  CHECK_THROWS_WITH_AS(run_replicates(study(), broken, 3, 5, 1, true),
                       "replicate 0: restarts must be >= 1",
                       InvalidInputError);
}
