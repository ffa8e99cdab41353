#include <cmath>
#include <vector>

#include "doctest.h"
#include "hubmodel/likelihood.hpp"
#include "hubmodel/rng.hpp"
#include "support/helpers.hpp"

using namespace hubmodel;
using testutil::for_each_assignment;
using testutil::kInf;
using testutil::make_data;
using testutil::oracle_group_log_lik;
using testutil::random_params;

TEST_CASE("complete-data log-likelihood on pinned cases") {
  const Params p = make_params(Variant::asymmetric, 1, 2, {1.0}, {1, 0.5});
  CHECK(complete_data_log_lik(make_data({{1, 0}}), {0}, p) ==
        doctest::Approx(std::log(0.5)).epsilon(1e-9));

  const Params ones = make_params(Variant::asymmetric, 1, 2, {1.0}, {1, 1});
  CHECK(complete_data_log_lik(make_data({{1, 1}}), {0}, ones) == 0.0);
}

TEST_CASE("infeasible labels score minus infinity, bad shapes throw") {
  const Params p = make_params(Variant::asymmetric, 1, 2, {1.0}, {1, 0.5});
  CHECK(complete_data_log_lik(make_data({{0, 1}}), {0}, p) == -kInf);
  CHECK_THROWS_AS(complete_data_log_lik(make_data({{1, 0, 1}}), {0}, p),
                  InvalidInputError);
  CHECK_THROWS_AS(complete_data_log_lik(make_data({{1, 0}}), {0, 0}, p),
                  InvalidInputError);
  CHECK_THROWS_AS(complete_data_log_lik(make_data({{1, 0}}), {1}, p),
                  InvalidInputError);
}

TEST_CASE("complete-data log-likelihood matches a scalar-loop recount") {
  Rng rng(2024);
  for (int rep = 0; rep < 40; ++rep) {
    const Variant v =
        rep % 2 ? Variant::null_component : Variant::asymmetric;
    const int n_L = 2;
    const int n = 3;
    const Params p = random_params(rng, v, n_L, n);
    auto [g, z] = sample_data(p, 4, 1000 + rep);
    double want = 0.0;
    for (int t = 0; t < g.T; ++t) want += oracle_group_log_lik(g.row(t), p, z[t]);
    CHECK(complete_data_log_lik(g, z, p) ==
          doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("marginal log-likelihood pinned cases") {
  const Params one = make_params(Variant::asymmetric, 1, 2, {1.0}, {1, 0.3});
  CHECK(marginal_log_lik(make_data({{1, 1}}), one) ==
        doctest::Approx(std::log(0.3)).epsilon(1e-9));

  const Params two = make_params(Variant::asymmetric, 2, 2, {0.5, 0.5},
                                 {1, 0, 0, 1});
  CHECK(marginal_log_lik(make_data({{1, 0}}), two) ==
        doctest::Approx(std::log(0.5)).epsilon(1e-9));

  // no component can produce a group missing every forced node
  CHECK(marginal_log_lik(make_data({{0, 0}}), two) == -kInf);
  CHECK_THROWS_AS(marginal_log_lik(make_data({{1, 0, 0}}), two),
                  InvalidInputError);
}

TEST_CASE("marginal likelihood normalizes over all outcomes") {
  Rng rng(7);
  for (const Variant v : {Variant::asymmetric, Variant::null_component}) {
    for (int rep = 0; rep < 5; ++rep) {
      const int n = 2 + rep;  // up to 6 nodes
      const int n_L = std::max(1, n / 2);
      const Params p = random_params(rng, v, n_L, n);
      double mass = 0.0;
      for (std::uint32_t o = 0; o < (1u << n); ++o) {
        std::vector<std::vector<int>> row(1, std::vector<int>(n));
        for (int j = 0; j < n; ++j) row[0][j] = (o >> j) & 1u;
        mass += std::exp(marginal_log_lik(make_data(row), p));
      }
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("degenerate null weight reduces to an independent product") {
  const Params p = make_params(Variant::null_component, 1, 3, {1.0, 0.0},
                               {0.2, 0.6, 0.4, 1, 0.5, 0.5});
  const GroupedData g = make_data({{1, 0, 1}, {0, 0, 0}});
  const double direct = std::log(0.2) + std::log(0.4) + std::log(0.4) +
                        std::log(0.8) + std::log(0.4) + std::log(0.6);
  CHECK(marginal_log_lik(g, p) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("closed-form estimate on pinned cases") {
  SUBCASE("single cluster") {
    const MleResult m =
        mle_given_labels(make_data({{1, 1}, {1, 0}}), {0, 0}, 1,
                         Variant::asymmetric);
    CHECK(m.A == std::vector<double>{1.0, 0.5});
    CHECK(m.rho == std::vector<double>{1.0});
    CHECK(m.empty_rows.empty());
  }
  SUBCASE("two singleton clusters") {
    const MleResult m =
        mle_given_labels(make_data({{1, 0}, {0, 1}}), {0, 1}, 2,
                         Variant::asymmetric);
    CHECK(m.A == std::vector<double>{1, 0, 0, 1});
    CHECK(m.rho == std::vector<double>{0.5, 0.5});
  }
  SUBCASE("empty cluster filled and flagged") {
    const MleResult m = mle_given_labels(make_data({{1, 0}, {1, 1}}), {0, 0},
                                         2, Variant::asymmetric);
    CHECK(m.empty_rows == std::vector<std::int32_t>{1});
    CHECK(m.A[2] == 0.5);  // row 1 fill
    CHECK(m.A[3] == 1.0);  // forced column survives the fill
    CHECK(m.rho[1] == 0.0);
  }
  SUBCASE("null variant estimates the leaderless row from label 0") {
    const MleResult m =
        mle_given_labels(make_data({{0, 1, 0}, {0, 0, 1}, {1, 1, 0}}),
                         {0, 0, 1}, 1, Variant::null_component);
    CHECK(m.A[0] == 0.0);
    CHECK(m.A[1] == 0.5);
    CHECK(m.A[2] == 0.5);
    CHECK(m.A[3] == 1.0);
    CHECK(m.rho[0] == doctest::Approx(2.0 / 3));
  }
}

TEST_CASE("closed-form estimate matches an independent tally") {
  Rng rng(11);
  for (int rep = 0; rep < 30; ++rep) {
    const Variant v =
        rep % 2 ? Variant::null_component : Variant::asymmetric;
    const int n_L = 3, n = 6, T = 25;
    const Params p = random_params(rng, v, n_L, n);
    auto [g, z] = sample_data(p, T, 500 + rep);
    const MleResult m = mle_given_labels(g, z, n_L, v);

    const int rows = v == Variant::asymmetric ? n_L : n_L + 1;
    std::int64_t total = 0;
    for (int r = 0; r < rows; ++r) {
      std::int64_t size = 0;
      std::vector<std::int64_t> col(n, 0);
      for (int t = 0; t < T; ++t) {
        if (z[t] != r) continue;
        ++size;
        for (int j = 0; j < n; ++j) col[j] += g(t, j);
      }
      total += size;
      CHECK(m.counts[r] == size);
      CHECK(m.rho[r] == static_cast<double>(size) / T);
      if (size == 0) continue;
      for (int j = 0; j < n; ++j)
        CHECK(m.A[static_cast<std::size_t>(r) * n + j] ==
              static_cast<double>(col[j]) / size);
    }
    CHECK(total == T);
    double rho_sum = 0.0;
    for (double x : m.rho) rho_sum += x;
    CHECK(rho_sum == doctest::Approx(1.0).epsilon(1e-12));
    // feasible labels saturate the forced column of every nonempty cluster
    for (int r = 0; r < rows; ++r) {
      const int hc = hub_column(v, r);
      if (hc >= 0 && m.counts[r] > 0)
        CHECK(m.A[static_cast<std::size_t>(r) * n + hc] == 1.0);
    }
  }
}

TEST_CASE("profile log-likelihood pinned cases") {
  CHECK(profile_log_lik(make_data({{1, 1}, {1, 1}}), {0, 0}, 1,
                        Variant::asymmetric) == 0.0);
  CHECK(profile_log_lik(make_data({{1, 0}, {1, 1}}), {0, 0}, 1,
                        Variant::asymmetric) ==
        doctest::Approx(2 * std::log(0.5)).epsilon(1e-9));
  // assignment naming an absent node maximizes over unit-diagonal matrices
  CHECK(profile_log_lik(make_data({{0, 1}}), {0}, 1, Variant::asymmetric) ==
        -kInf);
}

TEST_CASE("profile value dominates every fixed matrix on a mesh") {
  Rng rng(31);
  const int n = 3, T = 4, n_L = 2;
  for (int rep = 0; rep < 10; ++rep) {
    const Params p = random_params(rng, Variant::asymmetric, n_L, n);
    auto [g, z] = sample_data(p, T, 900 + rep);
    const MleResult m = mle_given_labels(g, z, n_L, Variant::asymmetric);
    // separable objective: per free entry, the tally mean beats the best
    // 0.01-mesh value of c*log(a) + (size-c)*log(1-a)
    for (int r = 0; r < m.rows; ++r) {
      if (m.counts[r] == 0) continue;
      for (int j = 0; j < n; ++j) {
        if (j == hub_column(Variant::asymmetric, r)) continue;
        std::int64_t c = 0;
        for (int t = 0; t < T; ++t)
          if (z[t] == r) c += g(t, j);
        const double size = static_cast<double>(m.counts[r]);
        const double ahat = m.A[static_cast<std::size_t>(r) * n + j];
        auto value = [&](double a) {
          double s = 0.0;
          if (c > 0) s += c * std::log(a);
          if (size - c > 0) s += (size - c) * std::log(1.0 - a);
          return s;
        };
        double best = -kInf;
        for (int k = 0; k <= 100; ++k) best = std::max(best, value(k / 100.0));
        CHECK(value(ahat) >= best - 1e-9);
      }
    }
    // and the assembled value agrees with evaluating at the estimate
    Params fitted;
    fitted.variant = Variant::asymmetric;
    fitted.n_L = n_L;
    fitted.n = n;
    fitted.rho = m.rho;
    fitted.A = m.A;
    CHECK(profile_log_lik(g, z, n_L, Variant::asymmetric) ==
          doctest::Approx(complete_data_log_lik(g, z, fitted)).epsilon(1e-9));
  }
}

TEST_CASE("population objective collapses for one group") {
  const Params p = make_params(Variant::asymmetric, 2, 3, {0.5, 0.5},
                               {1, 0.3, 0.7, 0.2, 1, 0.6});
  const double got = population_profile_lik({0}, {0}, p);
  double want = 0.0;
  for (int j = 0; j < 3; ++j) {
    const double q = p.a(0, j);
    if (q > 0) want += q * std::log(q);
    if (q < 1) want += (1 - q) * std::log(1 - q);
  }
  CHECK(got == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("population objective peaks at the true assignment") {
  Rng rng(77);
  const int T = 4, n_L = 2, n = 5;
  for (int rep = 0; rep < 8; ++rep) {
    const Params p = random_params(rng, Variant::asymmetric, n_L, n, 0.1, 0.9);
    Labels truth(T);
    for (int t = 0; t < T; ++t)
      truth[t] = static_cast<std::int32_t>(rng.index(n_L));
    const double at_truth = population_profile_lik(truth, truth, p);
    for_each_assignment(T, n_L, Variant::asymmetric, [&](const Labels& z) {
      CHECK(population_profile_lik(z, truth, p) <= at_truth + 1e-9);
    });
  }
  const Params p = make_params(Variant::asymmetric, 1, 2, {1.0}, {1, 0.5});
  CHECK_THROWS_AS(population_profile_lik({0}, {0, 0}, p), InvalidInputError);
}
