#include "evaluator/binomial.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "evaluator/error.hpp"

namespace evaluator {

namespace {

void check_args(std::int64_t n, double p, std::int64_t k) {
    if (n < 1 || !(p >= 0.0 && p <= 1.0) || k < 0 || k > n + 1) {
        throw Error(ErrorCode::OutOfRange, "binomial tail arguments out of range (n=" + std::to_string(n) +
                                               ", p=" + std::to_string(p) + ", k=" + std::to_string(k) + ")");
    }
}

// Sum of pmf(i) for i in [lo, hi), scaled by the largest term before exp.
double pmf_range_sum(std::int64_t n, double p, std::int64_t lo, std::int64_t hi) {
    if (lo >= hi) return 0.0;
    if (p == 0.0) return lo == 0 ? 1.0 : 0.0;
    if (p == 1.0) return hi == n + 1 ? 1.0 : 0.0;

    const double log_p = std::log(p);
    const double log_q = std::log1p(-p);
    const double log_n_fact = std::lgamma(static_cast<double>(n) + 1.0);

    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(hi - lo));
    for (std::int64_t i = lo; i < hi; ++i) {
        const auto di = static_cast<double>(i);
        const auto dn = static_cast<double>(n);
        terms.push_back(log_n_fact - std::lgamma(di + 1.0) - std::lgamma(dn - di + 1.0) + di * log_p +
                        (dn - di) * log_q);
    }
    const double peak = *std::max_element(terms.begin(), terms.end());
    double sum = 0.0;
    for (double t : terms) sum += std::exp(t - peak);
    return std::min(1.0, std::exp(peak) * sum);
}

}  // namespace

double binomial_sf(std::int64_t n, double p, std::int64_t k) {
    check_args(n, p, k);
    if (k == 0) return 1.0;
    return pmf_range_sum(n, p, k, n + 1);
}

double binomial_cdf_below(std::int64_t n, double p, std::int64_t k) {
    check_args(n, p, k);
    if (k == n + 1) return 1.0;
    return pmf_range_sum(n, p, 0, k);
}

}  // namespace evaluator
