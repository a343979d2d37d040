#include "minsum/exact.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "minsum/kernels.hpp"

namespace minsum {

namespace {

// Running sufficient statistics per part: size, coordinate sums, sum of
// squared norms.  The part's minsum contribution is
// size * sumsq - ||sum||^2, clamped at zero against rounding.
struct PartAcc {
  std::int64_t size = 0;
  std::vector<double> sum;
  double sumsq = 0.0;
};

double part_cost(const PartAcc& a, std::size_t d) {
  if (a.size == 0) return 0.0;
  double s2 = kern::sumsq(a.sum.data(), d);
  double c = static_cast<double>(a.size) * a.sumsq - s2;
  return c > 0.0 ? c : 0.0;
}

struct Enumerator {
  const Dataset& ds;
  std::int32_t k;
  std::size_t d;
  std::vector<std::int32_t> rgs;
  std::vector<PartAcc> parts;
  std::vector<double> part_costs;
  double current = 0.0;

  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<std::int32_t> best_rgs;
  std::int32_t best_parts = 0;
  std::uint64_t examined = 0;

  explicit Enumerator(const Dataset& ds_, std::int32_t k_)
      : ds(ds_), k(k_), d(ds_.dim()), rgs(ds_.size(), 0),
        parts(static_cast<std::size_t>(k_)), part_costs(static_cast<std::size_t>(k_), 0.0) {
    for (auto& p : parts) p.sum.assign(d, 0.0);
  }

  void place(std::size_t i, std::int32_t c) {
    PartAcc& a = parts[static_cast<std::size_t>(c)];
    const double* p = ds.row(i);
    a.size++;
    for (std::size_t j = 0; j < d; ++j) a.sum[j] += p[j];
    a.sumsq += kern::sumsq(p, d);
    current -= part_costs[static_cast<std::size_t>(c)];
    part_costs[static_cast<std::size_t>(c)] = part_cost(a, d);
    current += part_costs[static_cast<std::size_t>(c)];
  }

  void unplace(std::size_t i, std::int32_t c) {
    PartAcc& a = parts[static_cast<std::size_t>(c)];
    const double* p = ds.row(i);
    a.size--;
    for (std::size_t j = 0; j < d; ++j) a.sum[j] -= p[j];
    a.sumsq -= kern::sumsq(p, d);
    current -= part_costs[static_cast<std::size_t>(c)];
    part_costs[static_cast<std::size_t>(c)] = part_cost(a, d);
    current += part_costs[static_cast<std::size_t>(c)];
  }

  // Standard restricted-growth recursion: point i may join any used part or
  // open the next one, never exceeding k parts.  Visiting order is
  // lexicographic in the growth string, so the first strict minimum seen is
  // the lexicographically smallest optimum.
  void run(std::size_t i, std::int32_t used) {
    if (i == ds.size()) {
      examined++;
      if (current < best_cost) {
        best_cost = current;
        best_rgs = rgs;
        best_parts = used;
      }
      return;
    }
    std::int32_t top = std::min(used, k - 1);
    for (std::int32_t c = 0; c <= top; ++c) {
      rgs[i] = c;
      place(i, c);
      run(i + 1, std::max(used, c + 1));
      unplace(i, c);
    }
  }
};

}  // namespace

ExactResult brute_force_minsum(const Dataset& ds, std::int32_t k, std::size_t limit) {
  if (k < 1) throw InvalidLabelingError("brute_force_minsum needs k >= 1");
  if (ds.size() > limit)
    throw TooLargeError("brute_force_minsum: n exceeds the enumeration limit");

  Enumerator en(ds, k);
  en.run(0, 0);

  ExactResult res;
  res.labeling.labels = en.best_rgs;
  res.labeling.k = k;
  res.cost = en.best_cost;
  res.partitions_examined = en.examined;
  return res;
}

FixedCenterResult brute_force_fixed_centers(
    const Dataset& ds, const std::vector<double>& centers, std::int32_t k,
    const std::vector<std::int64_t>& size_lo, const std::vector<std::int64_t>& size_hi,
    const std::vector<double>& weights, std::size_t limit) {
  std::size_t n = ds.size(), d = ds.dim(), kk = static_cast<std::size_t>(k);
  if (k < 1 || centers.size() != kk * d)
    throw MismatchError("brute_force_fixed_centers: bad center block");
  if (size_lo.size() != kk || size_hi.size() != kk)
    throw MismatchError("brute_force_fixed_centers: bound vectors must have length k");
  if (n > limit)
    throw TooLargeError("brute_force_fixed_centers: n exceeds the enumeration limit");

  std::vector<double> w = weights;
  if (w.empty()) w.assign(kk, 1.0);
  if (w.size() != kk)
    throw MismatchError("brute_force_fixed_centers: weight vector must have length k");

  std::int64_t lo_total = 0, hi_total = 0;
  for (std::size_t c = 0; c < kk; ++c) {
    if (size_lo[c] < 0 || size_hi[c] < size_lo[c])
      throw InfeasibleError("brute_force_fixed_centers: inconsistent bounds");
    lo_total += size_lo[c];
    hi_total += size_hi[c];
  }
  if (lo_total > static_cast<std::int64_t>(n) || hi_total < static_cast<std::int64_t>(n))
    throw InfeasibleError("brute_force_fixed_centers: bounds admit no assignment");

  // point -> center cost table
  std::vector<double> cost(n * kk);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < kk; ++c)
      cost[i * kk + c] = w[c] * kern::sqdist(ds.row(i), centers.data() + c * d, d);

  std::vector<std::int32_t> assign(n, 0), best_assign;
  std::vector<std::int64_t> count(kk, 0);
  double best = std::numeric_limits<double>::infinity();
  double acc = 0.0;

  // depth-first over assignments; prune when remaining points cannot fill the
  // outstanding lower bounds
  auto deficit = [&]() {
    std::int64_t need = 0;
    for (std::size_t c = 0; c < kk; ++c)
      if (count[c] < size_lo[c]) need += size_lo[c] - count[c];
    return need;
  };

  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (acc >= best) return;
    if (deficit() > static_cast<std::int64_t>(n - i)) return;
    if (i == n) {
      best = acc;
      best_assign = assign;
      return;
    }
    for (std::size_t c = 0; c < kk; ++c) {
      if (count[c] >= size_hi[c]) continue;
      assign[i] = static_cast<std::int32_t>(c);
      count[c]++;
      acc += cost[i * kk + c];
      rec(i + 1);
      acc -= cost[i * kk + c];
      count[c]--;
    }
  };
  rec(0);

  if (best_assign.empty() && n > 0)
    throw InfeasibleError("brute_force_fixed_centers: no assignment met the bounds");

  FixedCenterResult res;
  res.labeling.labels = best_assign;
  res.labeling.k = k;
  res.cost = best;
  return res;
}

}  // namespace minsum
