#pragma once

#include <span>

namespace satd {

struct MannWhitneyResult {
  double u_a = 0.0; // rank sum of sample a minus n_a(n_a+1)/2
  double u_b = 0.0;
  double p_value = 1.0; // two-sided
  bool exact = false;
};

// Mann-Whitney U with midranks for ties. Exact null distribution when the
// samples hold no ties and n_a + n_b <= 12; otherwise the normal
// approximation with tie and continuity corrections. Throws
// std::invalid_argument on an empty sample.
MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

// Two-sided exact p-value for statistic u (no ties).
double mann_whitney_exact_p(double u, std::size_t n_a, std::size_t n_b);

} // namespace satd
