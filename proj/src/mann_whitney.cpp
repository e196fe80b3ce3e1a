#include "satd_radar/mann_whitney.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace satd {

double mann_whitney_exact_p(double u, std::size_t n_a, std::size_t n_b) {
  // count[m][k][s]: arrangements of m a-values and k b-values with U = s,
  // built from f(m, k, s) = f(m - 1, k, s - k) + f(m, k - 1, s).
  const std::size_t max_u = n_a * n_b;
  std::vector<std::vector<std::vector<double>>> count(
      n_a + 1, std::vector<std::vector<double>>(n_b + 1));
  for (std::size_t m = 0; m <= n_a; ++m)
    for (std::size_t k = 0; k <= n_b; ++k) {
      auto &c = count[m][k];
      c.assign(m * k + 1, 0.0);
      if (m == 0 || k == 0) {
        c[0] = 1.0;
        continue;
      }
      for (std::size_t s = 0; s <= m * k; ++s) {
        double v = 0.0;
        if (s >= k && s - k < count[m - 1][k].size())
          v += count[m - 1][k][s - k];
        if (s < count[m][k - 1].size())
          v += count[m][k - 1][s];
        c[s] = v;
      }
    }
  const auto &dist = count[n_a][n_b];
  double total = std::accumulate(dist.begin(), dist.end(), 0.0);
  double tail_u = std::min(u, static_cast<double>(max_u) - u);
  double tail = 0.0;
  for (std::size_t s = 0; s <= max_u && static_cast<double>(s) <= tail_u + 1e-9; ++s)
    tail += dist[s];
  return std::min(1.0, 2.0 * tail / total);
}

MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("Mann-Whitney U needs two nonempty samples");
  const std::size_t n_a = a.size(), n_b = b.size(), n = n_a + n_b;

  std::vector<std::pair<double, bool>> pooled; // value, from a
  pooled.reserve(n);
  for (double x : a)
    pooled.emplace_back(x, true);
  for (double x : b)
    pooled.emplace_back(x, false);
  std::sort(pooled.begin(), pooled.end(),
            [](const auto &x, const auto &y) { return x.first < y.first; });

  double rank_sum_a = 0.0;
  double tie_term = 0.0;
  bool ties = false;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && pooled[j].first == pooled[i].first)
      ++j;
    double t = static_cast<double>(j - i);
    double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k)
      if (pooled[k].second)
        rank_sum_a += midrank;
    if (t > 1) {
      ties = true;
      tie_term += t * t * t - t;
    }
    i = j;
  }

  MannWhitneyResult r;
  const double na = static_cast<double>(n_a), nb = static_cast<double>(n_b);
  r.u_a = rank_sum_a - na * (na + 1.0) / 2.0;
  r.u_b = na * nb - r.u_a;

  if (!ties && n <= 12) {
    r.exact = true;
    r.p_value = mann_whitney_exact_p(r.u_a, n_a, n_b);
    return r;
  }

  const double nn = static_cast<double>(n);
  const double mu = na * nb / 2.0;
  const double var = na * nb / 12.0 * ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
  const double u = std::max(r.u_a, r.u_b);
  if (var <= 0.0) {
    r.p_value = 1.0;
    return r;
  }
  const double z = (u - mu - 0.5) / std::sqrt(var);
  r.p_value = std::clamp(std::erfc(z / std::sqrt(2.0)), 0.0, 1.0);
  return r;
}

} // namespace satd
