#include "evaluator/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "evaluator/binomial.hpp"
#include "evaluator/error.hpp"

namespace evaluator {

namespace {

using boost::multiprecision::cpp_int;

void check_level(double value, const char* name) {
    if (!(value > 0.0 && value < 1.0)) {
        throw Error(ErrorCode::OutOfRange, std::string(name) + " must lie strictly between 0 and 1, got " +
                                               std::to_string(value));
    }
}

// x = mantissa / 2^exponent exactly, for finite positive x.
std::pair<cpp_int, int> as_dyadic(double x) {
    int e = 0;
    const double m = std::frexp(x, &e);
    return {cpp_int(static_cast<std::int64_t>(std::ldexp(m, 53))), 53 - e};
}

// Exact Pr[Bin(n, 1 - alpha) >= k] <= delta, treating alpha and delta as the
// binary fractions they are. With alpha = A / 2^E and delta = D / 2^F this is
//   2^F * sum_{i>=k} C(n,i) (2^E - A)^i A^(n-i) <= D * 2^(E n).
bool exact_tail_at_most(std::int64_t n, double alpha, std::int64_t k, double delta) {
    const auto [a, e] = as_dyadic(alpha);
    const auto [d, f] = as_dyadic(delta);
    const cpp_int p = (cpp_int(1) << e) - a;
    const auto count = static_cast<std::size_t>(n);

    std::vector<cpp_int> p_pow(count + 1, cpp_int(1));
    std::vector<cpp_int> q_pow(count + 1, cpp_int(1));
    for (std::size_t i = 1; i <= count; ++i) {
        p_pow[i] = p_pow[i - 1] * p;
        q_pow[i] = q_pow[i - 1] * a;
    }
    cpp_int tail = 0;
    cpp_int coeff = 1;  // C(n, i)
    for (std::size_t i = 0; i <= count; ++i) {
        if (i > 0) coeff = coeff * (count - i + 1) / i;
        if (static_cast<std::int64_t>(i) >= k) tail += coeff * p_pow[i] * q_pow[count - i];
    }
    return (tail << f) <= (d << (e * static_cast<int>(n)));
}

constexpr std::int64_t exact_check_limit = 1000;

bool tail_at_most(std::int64_t n, double alpha, std::int64_t k, double delta) {
    const double tail = binomial_sf(n, 1.0 - alpha, k);
    if (std::abs(tail - delta) > 1e-9 * delta || n > exact_check_limit) return tail <= delta;
    return exact_tail_at_most(n, alpha, k, delta);
}

}  // namespace

std::string_view to_string(ThresholdKind kind) {
    switch (kind) {
        case ThresholdKind::ville: return "ville";
        case ThresholdKind::pac: return "pac";
        case ThresholdKind::bonferroni: return "bonferroni";
    }
    return "unknown";
}

ThresholdKind parse_threshold_kind(std::string_view name) {
    if (name == "ville") return ThresholdKind::ville;
    if (name == "pac") return ThresholdKind::pac;
    if (name == "bonferroni") return ThresholdKind::bonferroni;
    throw Error(ErrorCode::Usage, "unknown threshold kind '" + std::string(name) + "'");
}

ThresholdSpec ville_threshold(double alpha) {
    check_level(alpha, "alpha");
    ThresholdSpec spec;
    spec.kind = ThresholdKind::ville;
    spec.alpha = alpha;
    spec.value = 1.0 / alpha;
    return spec;
}

ThresholdSpec bonferroni_threshold(double alpha, std::int64_t t_cal_max) {
    check_level(alpha, "alpha");
    if (t_cal_max < 1) throw Error(ErrorCode::OutOfRange, "Bonferroni horizon must be positive");
    ThresholdSpec spec;
    spec.kind = ThresholdKind::bonferroni;
    spec.alpha = alpha;
    spec.value = static_cast<double>(t_cal_max) / alpha;
    spec.t_cal_max = t_cal_max;
    return spec;
}

std::vector<double> null_maxima(const RatioModel& model, const CalibrationSet& thresh_set, Exec exec) {
    std::vector<const LabeledTrajectory*> nulls;
    for (const auto& item : thresh_set.items) {
        if (item.is_null()) nulls.push_back(&item);
    }
    if (nulls.empty()) {
        throw Error(ErrorCode::NoNullTrajectories, "threshold set contains no successful trajectories");
    }

    std::vector<double> maxima(nulls.size());
    const auto count = static_cast<long>(nulls.size());
    auto max_of = [&](long i) {
        const auto process = eval_process(model, nulls[static_cast<std::size_t>(i)]->sequence);
        maxima[static_cast<std::size_t>(i)] = *std::max_element(process.begin(), process.end());
    };
    if (exec == Exec::serial) {
        for (long i = 0; i < count; ++i) max_of(i);
    } else {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < count; ++i) max_of(i);
    }
    return maxima;
}

std::int64_t pac_min_samples(double alpha, double delta) {
    check_level(alpha, "alpha");
    check_level(delta, "delta");
    auto n = static_cast<std::int64_t>(std::ceil(std::log(delta) / std::log1p(-alpha)));
    n = std::max<std::int64_t>(n, 1);
    while (n > 1 && tail_at_most(n - 1, alpha, n - 1, delta)) --n;
    while (!tail_at_most(n, alpha, n, delta)) ++n;
    return n;
}

std::int64_t pac_index(std::int64_t n, double alpha, double delta) {
    check_level(alpha, "alpha");
    check_level(delta, "delta");
    if (n < 1) throw Error(ErrorCode::OutOfRange, "pac_index needs n >= 1");

    if (!tail_at_most(n, alpha, n, delta)) {
        const auto needed = pac_min_samples(alpha, delta);
        throw InsufficientCalibration(std::to_string(n) + " successful calibration trajectories cannot certify alpha=" +
                                          std::to_string(alpha) + ", delta=" + std::to_string(delta) +
                                          "; at least " + std::to_string(needed) + " are required",
                                      needed);
    }
    // The tail is non-increasing in i, so binary search for the first i that passes.
    std::int64_t lo = 1;
    std::int64_t hi = n;
    while (lo < hi) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (tail_at_most(n, alpha, mid, delta)) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return lo;
}

ThresholdSpec pac_threshold(std::span<const double> maxima, double alpha, double delta, std::uint64_t seed) {
    if (maxima.empty()) throw Error(ErrorCode::NoNullTrajectories, "PAC threshold needs at least one null maximum");
    const auto n = static_cast<std::int64_t>(maxima.size());
    const std::int64_t k = pac_index(n, alpha, delta);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<std::pair<double, double>> ranked;
    ranked.reserve(maxima.size());
    for (double m : maxima) ranked.emplace_back(m, coin(rng));
    std::sort(ranked.begin(), ranked.end());

    ThresholdSpec spec;
    spec.kind = ThresholdKind::pac;
    spec.alpha = alpha;
    spec.delta = delta;
    spec.value = ranked[static_cast<std::size_t>(k - 1)].first;
    spec.n_null = n;
    spec.k_index = k;
    return spec;
}

}  // namespace evaluator
