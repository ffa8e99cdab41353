#include "hubmodel/identifiability.hpp"

#include <cmath>

namespace hubmodel {

namespace {

void check_tol(double tol) {
  if (!(tol >= 0.0)) throw InvalidInputError("tolerance must be >= 0");
}

Condition interior_weights(const Params& p, double tol) {
  Condition c{"i", "every mixing weight strictly inside (0,1)", true, {}, {}};
  for (int r = 0; r < p.rows(); ++r) {
    if (p.rho[r] > tol && 1.0 - p.rho[r] > tol) continue;
    c.pass = false;
    ConditionWitness v;
    v.i = to_external_label(p.variant, r);
    v.value = p.rho[r];
    c.violations.push_back(v);
  }
  return c;
}

Condition entries_below_one(const Params& p, double tol) {
  Condition c{"ii", "every free membership probability strictly below 1", true,
              {}, {}};
  for (int r = 0; r < p.rows(); ++r) {
    const int hc = hub_column(p.variant, r);
    for (int j = 0; j < p.n; ++j) {
      if (j == hc) continue;
      if (1.0 - p.a(r, j) > tol) continue;
      c.pass = false;
      ConditionWitness v;
      v.i = to_external_label(p.variant, r);
      v.node = j + 1;
      v.value = p.a(r, j);
      c.violations.push_back(v);
    }
  }
  return c;
}

Condition pairs_separated(const Params& p, double tol) {
  Condition c{"iii", "every leader pair differs on some follower", true, {},
              {}};
  for (int h = 0; h < p.n_L; ++h) {
    for (int h2 = h + 1; h2 < p.n_L; ++h2) {
      const int r = p.variant == Variant::asymmetric ? h : h + 1;
      const int r2 = p.variant == Variant::asymmetric ? h2 : h2 + 1;
      int best_k = -1;
      double best_gap = -1.0;
      for (int k = p.n_L; k < p.n; ++k) {
        const double gap = std::fabs(p.a(r, k) - p.a(r2, k));
        if (gap > best_gap) {
          best_gap = gap;
          best_k = k;
        }
      }
      ConditionWitness w;
      w.i = h + 1;
      w.i_prime = h2 + 1;
      w.node = best_k + 1;
      w.value = best_gap;
      if (best_k >= 0 && best_gap > tol) {
        c.witnesses.push_back(w);
      } else {
        c.pass = false;
        c.violations.push_back(w);
      }
    }
  }
  return c;
}

Condition null_row_separated(const Params& p, double tol) {
  Condition c{"iv",
              "the leaderless profile differs from every leader on two "
              "followers",
              true,
              {},
              {}};
  for (int h = 0; h < p.n_L; ++h) {
    const int r = h + 1;
    int k1 = -1, k2 = -1;
    for (int k = p.n_L; k < p.n; ++k) {
      if (std::fabs(p.a(0, k) - p.a(r, k)) <= tol) continue;
      if (k1 < 0) {
        k1 = k;
      } else {
        k2 = k;
        break;
      }
    }
    ConditionWitness w;
    w.i = h + 1;
    w.node = k1 >= 0 ? k1 + 1 : -1;
    w.node2 = k2 >= 0 ? k2 + 1 : -1;
    if (k2 >= 0) {
      c.witnesses.push_back(w);
    } else {
      c.pass = false;
      c.violations.push_back(w);
    }
  }
  return c;
}

}  // namespace

IdentifiabilityReport check_identifiability(const Params& p, double tol) {
  validate_params(p);
  check_tol(tol);
  IdentifiabilityReport rep;
  rep.variant = p.variant;
  rep.tol = tol;
  rep.conditions.push_back(interior_weights(p, tol));
  rep.conditions.push_back(entries_below_one(p, tol));
  rep.conditions.push_back(pairs_separated(p, tol));
  if (p.variant == Variant::null_component)
    rep.conditions.push_back(null_row_separated(p, tol));
  rep.pass = true;
  for (const auto& c : rep.conditions) rep.pass = rep.pass && c.pass;
  return rep;
}

std::vector<double> outcome_distribution(const Params& p, int cap) {
  validate_params(p);
  if (cap < 1) throw InvalidInputError("enumeration cap must be >= 1");
  if (p.n > cap)
    throw EnumerationCapError(
        "outcome enumeration refused: n = " + std::to_string(p.n) +
        " exceeds the cap of " + std::to_string(cap) +
        " (2^n outcomes would be enumerated)");
  const int rows = p.rows();
  const std::uint32_t total = 1u << p.n;
  std::vector<double> dist(total, 0.0);
  for (std::uint32_t o = 0; o < total; ++o) {
    double prob = 0.0;
    for (int r = 0; r < rows; ++r) {
      if (p.rho[r] == 0.0) continue;
      double q = p.rho[r];
      for (int j = 0; j < p.n && q != 0.0; ++j)
        q *= (o >> j) & 1u ? p.a(r, j) : 1.0 - p.a(r, j);
      prob += q;
    }
    dist[o] = prob;
  }
  return dist;
}

DistinctResult distributions_distinct(const Params& p1, const Params& p2,
                                      double tol, int cap) {
  if (p1.n != p2.n || p1.variant != p2.variant)
    throw InvalidInputError("parameter sets must share n and variant");
  check_tol(tol);
  const std::vector<double> d1 = outcome_distribution(p1, cap);
  const std::vector<double> d2 = outcome_distribution(p2, cap);
  DistinctResult res;
  for (std::uint32_t o = 0; o < d1.size(); ++o) {
    const double gap = std::fabs(d1[o] - d2[o]);
    if (gap > res.max_gap) {
      res.max_gap = gap;
      res.witness = o;
    }
  }
  res.distinct = res.max_gap > tol;
  return res;
}

}  // namespace hubmodel
