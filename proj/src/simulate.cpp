#include "hubmodel/simulate.hpp"

#include "hubmodel/rng.hpp"

namespace hubmodel {

void validate_design(const SimDesign& d) {
  if (d.n_L < 1) throw InvalidInputError("design needs n_L >= 1");
  if (d.n <= d.n_L) throw InvalidInputError("design needs n > n_L");
  if (d.n - d.n_L < d.n_L)
    throw InvalidInputError("design needs n - n_L >= n_L follower slots");
  if (d.T < 1) throw InvalidInputError("design needs T >= 1");
  auto check_range = [](const Range& r, const char* name) {
    if (!(0.0 <= r.lo) || !(r.lo < r.hi) || !(r.hi <= 1.0))
      throw InvalidInputError(std::string(name) +
                              " range needs 0 <= lo < hi <= 1");
  };
  check_range(d.in_range, "in");
  check_range(d.out_range, "out");
  if (d.in_range.lo < d.out_range.hi)
    throw InvalidInputError("in range must sit at or above out range");
  if (d.variant == Variant::null_component) {
    if (!(d.rho0 >= 0.0) || !(d.rho0 <= 1.0))
      throw InvalidInputError("rho0 must lie in [0,1]");
    if (!(d.pi >= 0.0) || !(d.pi <= 1.0))
      throw InvalidInputError("pi must lie in [0,1]");
  }
}

int follower_block(int n_L, int n, int f) {
  const int F = n - n_L;
  const int base = F / n_L;
  const int rem = F % n_L;
  const int wide = rem * (base + 1);  // followers living in the larger blocks
  if (f < wide) return f / (base + 1);
  return rem + (f - wide) / base;
}

Params generate_params(const SimDesign& d) {
  validate_design(d);
  Rng rng(derive_seed(d.seed, kParamsStream));

  Params p;
  p.variant = d.variant;
  p.n_L = d.n_L;
  p.n = d.n;
  const int rows = p.rows();
  p.A.assign(static_cast<std::size_t>(rows) * d.n, 0.0);
  p.rho.assign(rows, 0.0);

  if (d.variant == Variant::null_component) {
    for (int j = 0; j < d.n; ++j) p.a(0, j) = d.pi;
    p.rho[0] = d.rho0;
    for (int r = 1; r <= d.n_L; ++r) p.rho[r] = (1.0 - d.rho0) / d.n_L;
  } else {
    for (int r = 0; r < d.n_L; ++r) p.rho[r] = 1.0 / d.n_L;
  }

  // Hub rows in storage order, entries in column order, one draw per free
  // entry; the forced diagonal consumes no draw.
  for (int h = 0; h < d.n_L; ++h) {
    const int r = d.variant == Variant::asymmetric ? h : h + 1;
    for (int j = 0; j < d.n; ++j) {
      if (j == h) {
        p.a(r, j) = 1.0;
        continue;
      }
      const bool in_block =
          j >= d.n_L && follower_block(d.n_L, d.n, j - d.n_L) == h;
      const Range& range = in_block ? d.in_range : d.out_range;
      p.a(r, j) = rng.uniform(range.lo, range.hi);
    }
  }
  validate_params(p);
  return p;
}

std::pair<GroupedData, Labels> sample_data(const Params& p, int T,
                                           std::uint64_t seed) {
  validate_params(p);
  if (T < 1) throw InvalidInputError("sampling needs T >= 1");
  Rng rng(derive_seed(seed, kDataStream));

  std::vector<std::uint8_t> m(static_cast<std::size_t>(T) * p.n);
  Labels z(T);
  for (int t = 0; t < T; ++t) {
    const int r = rng.categorical(p.rho);
    z[t] = r;
    std::uint8_t* row = m.data() + static_cast<std::size_t>(t) * p.n;
    for (int j = 0; j < p.n; ++j) row[j] = rng.bernoulli(p.a(r, j)) ? 1 : 0;
  }
  return {GroupedData(T, p.n, std::move(m)), std::move(z)};
}

}  // namespace hubmodel
