#include "hubmodel/estimator.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "hubmodel/likelihood.hpp"
#include "hubmodel/rng.hpp"

namespace hubmodel {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Csr {
  std::vector<std::size_t> off;  // T+1
  std::vector<std::int32_t> idx;

  std::span<const std::int32_t> row(int t) const {
    return {idx.data() + off[t], off[t + 1] - off[t]};
  }
};

Csr build_presence(const GroupedData& g, int limit) {
  Csr c;
  c.off.assign(g.T + 1, 0);
  for (int t = 0; t < g.T; ++t) {
    std::size_t cnt = 0;
    const std::uint8_t* row = g.row(t);
    for (int j = 0; j < limit; ++j) cnt += row[j];
    c.off[t + 1] = c.off[t] + cnt;
  }
  c.idx.resize(c.off[g.T]);
  for (int t = 0; t < g.T; ++t) {
    std::int32_t* dst = c.idx.data() + c.off[t];
    const std::uint8_t* row = g.row(t);
    for (int j = 0; j < limit; ++j)
      if (row[j]) *dst++ = j;
  }
  return c;
}

// Clamped log tables. A group's score against row r decomposes as
// base[r] + sum of w over its present nodes; the forced column carries
// weight 0 so present-node sums never touch it.
struct Tables {
  std::vector<double> base;
  std::vector<double> w;

  void build(const std::vector<double>& A, int rows, int n, Variant variant,
             double eps) {
    base.assign(rows, 0.0);
    w.assign(static_cast<std::size_t>(rows) * n, 0.0);
    for (int r = 0; r < rows; ++r) {
      const int hc = hub_column(variant, r);
      const double* arow = A.data() + static_cast<std::size_t>(r) * n;
      double* wrow = w.data() + static_cast<std::size_t>(r) * n;
      double b = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == hc) {
          wrow[j] = 0.0;
          continue;
        }
        double a = arow[j];
        a = a < eps ? eps : (a > 1.0 - eps ? 1.0 - eps : a);
        const double l0 = std::log1p(-a);
        b += l0;
        wrow[j] = std::log(a) - l0;
      }
      base[r] = b;
    }
  }

  double score(int r, int n, std::span<const std::int32_t> present) const {
    const double* wrow = w.data() + static_cast<std::size_t>(r) * n;
    double s = base[r];
    for (std::int32_t j : present) s += wrow[j];
    return s;
  }
};

struct RestartOut {
  Labels z;
  std::vector<double> trace;
  double log_profile_lik = kNegInf;
  int iterations = 0;
  bool converged = false;
};

struct FitContext {
  const GroupedData& g;
  int n_L;
  Variant variant;
  const FitConfig& cfg;
  Csr presence;  // all nodes
  Csr leaders;   // leader columns only
};

void init_labels(const FitContext& ctx, int restart, Labels& z) {
  if (!ctx.cfg.initial_labels.empty()) {
    z = ctx.cfg.initial_labels;
    return;
  }
  Rng rng(derive_seed(ctx.cfg.seed, kInitStream,
                      static_cast<std::uint64_t>(restart)));
  const bool asym = ctx.variant == Variant::asymmetric;
  z.resize(ctx.g.T);
  for (int t = 0; t < ctx.g.T; ++t) {
    auto lead = ctx.leaders.row(t);
    if (asym) {
      z[t] = lead[rng.index(static_cast<int>(lead.size()))];
      continue;
    }
    if (rng.uniform() < 1.0 / (ctx.n_L + 1) || lead.empty()) {
      z[t] = 0;
    } else {
      z[t] = lead[rng.index(static_cast<int>(lead.size()))] + 1;
    }
  }
}

MleResult sparse_mle(const FitContext& ctx, const Labels& z) {
  const int rows =
      ctx.variant == Variant::asymmetric ? ctx.n_L : ctx.n_L + 1;
  std::vector<std::int64_t> counts(rows, 0);
  std::vector<std::int64_t> hits(static_cast<std::size_t>(rows) * ctx.g.n, 0);
  for (int t = 0; t < ctx.g.T; ++t) {
    const int r = z[t];
    ++counts[r];
    std::int64_t* acc = hits.data() + static_cast<std::size_t>(r) * ctx.g.n;
    for (std::int32_t j : ctx.presence.row(t)) ++acc[j];
  }
  return mle_from_tallies(counts, hits, rows, ctx.g.n, ctx.g.T, ctx.variant);
}

RestartOut run_restart(const FitContext& ctx, int restart) {
  const bool asym = ctx.variant == Variant::asymmetric;
  const int n = ctx.g.n;
  RestartOut out;
  init_labels(ctx, restart, out.z);

  Tables tb;
  for (int it = 1; it <= ctx.cfg.max_iterations; ++it) {
    MleResult mle = sparse_mle(ctx, out.z);
    tb.build(mle.A, mle.rows, n, ctx.variant, ctx.cfg.clamp_eps);

    bool changed = false;
    double total = 0.0;
    for (int t = 0; t < ctx.g.T; ++t) {
      const auto present = ctx.presence.row(t);
      const int cur = out.z[t];
      double cur_score = 0.0;
      double best_score = kNegInf;
      int best = -1;
      if (!asym) {
        const double s = tb.score(0, n, present);
        if (cur == 0) cur_score = s;
        best_score = s;
        best = 0;
      }
      for (std::int32_t c : ctx.leaders.row(t)) {
        const int r = asym ? c : c + 1;
        const double s = tb.score(r, n, present);
        if (r == cur) cur_score = s;
        if (s > best_score) {
          best_score = s;
          best = r;
        }
      }
      total += cur_score;
      if (best != cur) {
        changed = true;
        out.z[t] = best;
      }
    }
    out.trace.push_back(total);
    out.iterations = it;
    if (!changed) {
      out.converged = true;
      break;
    }
  }

  out.log_profile_lik = profile_log_lik(ctx.g, out.z, ctx.n_L, ctx.variant);
  return out;
}

}  // namespace

std::vector<double> e_step_scores(std::span<const std::uint8_t> group,
                                  const std::vector<double>& A, int rows,
                                  int n, Variant variant, double clamp_eps) {
  if (static_cast<int>(group.size()) != n)
    throw InvalidInputError("group length does not match n");
  if (A.size() != static_cast<std::size_t>(rows) * n)
    throw InvalidInputError("membership matrix has wrong shape");
  if (!(clamp_eps > 0.0) || !(clamp_eps < 0.5))
    throw InvalidInputError("clamp eps must lie in (0, 0.5)");

  Tables tb;
  tb.build(A, rows, n, variant, clamp_eps);
  std::vector<std::int32_t> present;
  for (int j = 0; j < n; ++j)
    if (group[j]) present.push_back(j);

  std::vector<double> scores(rows);
  for (int r = 0; r < rows; ++r) {
    double s = tb.score(r, n, present);
    const int hc = hub_column(variant, r);
    if (hc >= 0) {
      const double a = A[static_cast<std::size_t>(r) * n + hc];
      s += group[hc] ? std::log(a) : std::log1p(-a);
    }
    scores[r] = s;
  }
  return scores;
}

FitResult hard_em_fit(const GroupedData& g, int n_L, const FitConfig& cfg) {
  const bool asym = cfg.variant == Variant::asymmetric;
  if (g.T < 1) throw InvalidInputError("fit needs at least one group");
  if (n_L < (asym ? 1 : 0) || n_L > g.n)
    throw InvalidInputError("fit needs " + std::to_string(asym ? 1 : 0) +
                            " <= n_L <= n");
  if (cfg.restarts < 1) throw InvalidInputError("restarts must be >= 1");
  if (cfg.max_iterations < 1)
    throw InvalidInputError("max iterations must be >= 1");
  if (!(cfg.clamp_eps > 0.0) || !(cfg.clamp_eps < 0.5))
    throw InvalidInputError("clamp eps must lie in (0, 0.5)");

  FitContext ctx{g, n_L, cfg.variant, cfg, build_presence(g, g.n),
                 build_presence(g, n_L)};

  if (asym) {
    for (int t = 0; t < g.T; ++t)
      if (ctx.leaders.row(t).empty())
        throw InfeasibleInstanceError(
            "group " + std::to_string(t) + " contains no leader", t);
  }
  if (!cfg.initial_labels.empty()) {
    if (static_cast<int>(cfg.initial_labels.size()) != g.T)
      throw InvalidInputError("initial labels length does not match T");
    validate_labels(cfg.initial_labels, n_L, cfg.variant);
    if (auto bad = first_infeasible_group(g, cfg.initial_labels, cfg.variant))
      throw InvalidInputError("initial labels name an absent leader at group " +
                              std::to_string(*bad));
  }

  const int restarts = cfg.initial_labels.empty() ? cfg.restarts : 1;
  std::vector<RestartOut> outs(restarts);
  int jobs = cfg.jobs > 0
                 ? cfg.jobs
                 : static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::max(1, std::min(jobs, restarts));

  if (jobs == 1) {
    for (int r = 0; r < restarts; ++r) outs[r] = run_restart(ctx, r);
  } else {
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int r; (r = next.fetch_add(1)) < restarts;)
        outs[r] = run_restart(ctx, r);
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  int best = 0;
  for (int r = 1; r < restarts; ++r)
    if (outs[r].log_profile_lik > outs[best].log_profile_lik) best = r;

  FitResult fit;
  fit.labels = std::move(outs[best].z);
  fit.trace = std::move(outs[best].trace);
  fit.log_profile_lik = outs[best].log_profile_lik;
  fit.restart_index = best;
  fit.iterations = outs[best].iterations;
  fit.converged = outs[best].converged;
  fit.mle = mle_given_labels(g, fit.labels, n_L, cfg.variant);
  return fit;
}

}  // namespace hubmodel
