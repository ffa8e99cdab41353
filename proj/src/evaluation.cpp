#include "hubmodel/evaluation.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "hubmodel/likelihood.hpp"
#include "hubmodel/rng.hpp"

namespace hubmodel {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

MetricSummary summarize(const std::vector<double>& v) {
  std::vector<double> ok;
  ok.reserve(v.size());
  for (double x : v)
    if (!std::isnan(x)) ok.push_back(x);
  MetricSummary s;
  if (ok.empty()) {
    s.mean = kNaN;
    s.sd = kNaN;
    return s;
  }
  const auto m = static_cast<double>(ok.size());
  s.mean = pairwise_sum(ok) / m;
  if (ok.size() < 2) return s;
  std::vector<double> sq(ok.size());
  for (std::size_t i = 0; i < ok.size(); ++i) {
    const double d = ok[i] - s.mean;
    sq[i] = d * d;
  }
  s.sd = std::sqrt(pairwise_sum(sq) / (m - 1.0));
  return s;
}

}  // namespace

double mislabel_fraction(const Labels& est, const Labels& truth) {
  if (est.size() != truth.size())
    throw InvalidInputError("label vectors differ in length");
  if (est.empty()) throw InvalidInputError("label vectors are empty");
  std::size_t bad = 0;
  for (std::size_t t = 0; t < est.size(); ++t) bad += est[t] != truth[t];
  return static_cast<double>(bad) / static_cast<double>(est.size());
}

double rmse(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty())
    throw InvalidInputError("matrices differ in shape");
  std::vector<double> sq(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sq[i] = d * d;
  }
  return std::sqrt(pairwise_sum(sq) / static_cast<double>(a.size()));
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

std::uint64_t cell_seed(std::uint64_t master, Variant variant, int n_L, int n,
                        int T) {
  std::uint64_t s = derive_seed(master, kCellStream,
                                variant == Variant::null_component ? 1 : 0);
  s = derive_seed(s, kCellStream,
                  (static_cast<std::uint64_t>(n_L) << 32) |
                      static_cast<std::uint32_t>(n));
  return derive_seed(s, kCellStream, static_cast<std::uint64_t>(T));
}

ReplicateSummary run_replicates(const SimDesign& design, const FitConfig& fit,
                                int R, std::uint64_t seed, int jobs,
                                bool fail_fast) {
  validate_design(design);
  if (R < 1) throw InvalidInputError("replicate count must be >= 1");

  ReplicateSummary out;
  out.design = design;
  out.R = R;
  out.seed = seed;
  out.mislabel.assign(R, kNaN);
  out.rmse.assign(R, kNaN);
  out.rmse_star.assign(R, kNaN);
  out.errors.assign(R, "");

  std::vector<std::exception_ptr> eptr(R);
  auto one = [&](int r) {
    try {
      const std::uint64_t rep =
          derive_seed(seed, kReplicateStream, static_cast<std::uint64_t>(r));
      SimDesign d = design;
      d.seed = rep;
      const Params truth = generate_params(d);
      auto [data, z_true] = sample_data(truth, d.T, rep);

      FitConfig fc = fit;
      fc.variant = design.variant;
      fc.seed = rep;
      fc.jobs = 1;
      const FitResult res = hard_em_fit(data, design.n_L, fc);

      out.mislabel[r] = mislabel_fraction(res.labels, z_true);
      out.rmse[r] = rmse(res.mle.A, truth.A);
      const MleResult ref =
          mle_given_labels(data, z_true, design.n_L, design.variant);
      out.rmse_star[r] = rmse(ref.A, truth.A);
    } catch (const std::exception& e) {
      out.errors[r] = "replicate " + std::to_string(r) + ": " + e.what();
      eptr[r] = std::current_exception();
    }
  };

  int workers = jobs > 0 ? jobs
                         : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, R));
  if (workers == 1) {
    for (int r = 0; r < R; ++r) one(r);
  } else {
    std::atomic<int> next{0};
    auto loop = [&] {
      for (int r; (r = next.fetch_add(1)) < R;) one(r);
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(loop);
    for (auto& th : pool) th.join();
  }

  for (int r = 0; r < R; ++r)
    if (!out.errors[r].empty()) ++out.failures;
  if (fail_fast && out.failures > 0) {
    for (int r = 0; r < R; ++r) {
      if (!eptr[r]) continue;
      try {
        std::rethrow_exception(eptr[r]);
      } catch (const InfeasibleInstanceError& e) {
        throw InfeasibleInstanceError(out.errors[r], e.group_index);
      } catch (const EnumerationCapError&) {
        throw EnumerationCapError(out.errors[r]);
      } catch (const InvalidInputError&) {
        throw InvalidInputError(out.errors[r]);
      } catch (const std::exception&) {
        throw std::runtime_error(out.errors[r]);
      }
    }
  }

  out.mislabel_s = summarize(out.mislabel);
  out.rmse_s = summarize(out.rmse);
  out.rmse_star_s = summarize(out.rmse_star);
  return out;
}

}  // namespace hubmodel
