#pragma once

#include <cstdint>

namespace evaluator {

// Pr[Binomial(n, p) >= k] for 0 <= k <= n + 1, summed exactly in log space
// (log-gamma coefficients, no normal approximation).
double binomial_sf(std::int64_t n, double p, std::int64_t k);

// Pr[Binomial(n, p) < k]; the complement of binomial_sf.
double binomial_cdf_below(std::int64_t n, double p, std::int64_t k);

}  // namespace evaluator
