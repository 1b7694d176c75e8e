#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "evaluator/density_ratio.hpp"
#include "evaluator/execution.hpp"
#include "evaluator/trajectory.hpp"

namespace evaluator {

enum class ThresholdKind { ville, pac, bonferroni };

std::string_view to_string(ThresholdKind kind);
ThresholdKind parse_threshold_kind(std::string_view name);

// A resolved decision threshold c_alpha on the estimated ratio statistic.
struct ThresholdSpec {
    ThresholdKind kind = ThresholdKind::ville;
    double alpha = 0.05;
    double delta = 0.05;  // pac only
    double value = 20.0;
    std::int64_t n_null = 0;     // pac only
    std::int64_t k_index = 0;    // pac only
    std::int64_t t_cal_max = 0;  // bonferroni only
};

inline constexpr double default_delta = 0.05;

// 1 / alpha. Throws OutOfRange unless 0 < alpha < 1.
ThresholdSpec ville_threshold(double alpha);

// t_cal_max / alpha: Markov's inequality applied at level alpha / T to each
// per-step e-value.
ThresholdSpec bonferroni_threshold(double alpha, std::int64_t t_cal_max);

// max_t M̂_t for every successful trajectory, in input order. Throws
// NoNullTrajectories.
std::vector<double> null_maxima(const RatioModel& model, const CalibrationSet& thresh_set,
                                Exec exec = Exec::parallel);

// Smallest i in 1..n with Pr[Bin(n, 1 - alpha) >= i] <= delta. Comparisons
// that land within rounding distance of delta are settled in exact rational
// arithmetic. Throws InsufficientCalibration when (1 - alpha)^n > delta.
std::int64_t pac_index(std::int64_t n, double alpha, double delta);

// Smallest n for which pac_index(n, alpha, delta) exists.
std::int64_t pac_min_samples(double alpha, double delta);

// Order statistic M_(k) of the maxima with k = pac_index(n, alpha, delta).
// Ties are ordered by a seeded fair coin.
ThresholdSpec pac_threshold(std::span<const double> maxima, double alpha, double delta, std::uint64_t seed);

}  // namespace evaluator
