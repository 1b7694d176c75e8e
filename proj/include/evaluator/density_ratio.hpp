#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "evaluator/execution.hpp"
#include "evaluator/logistic.hpp"
#include "evaluator/trajectory.hpp"

namespace evaluator {

// Classifier-based estimate of the density ratio process
//   M_t = p_0(S_[1:t]) / p_1(S_[1:t]),
// one logistic model per step t = 1..t_max, each on the raw score prefix.
// Beyond t_max the statistic is frozen: step t_max is evaluated on the first
// t_max scores, so M_t is constant for t >= t_max.
struct RatioModel {
    std::vector<LogisticModel> step_models;
    double prior_1 = 0.5;
    std::size_t t_max = 0;
    FitConfig fit_config;

    void check() const;
};

// Fraction of successful (label 1) trajectories. Throws SingleClassData.
double estimate_prior(const CalibrationSet& dre);

// Largest t such that both labels have some trajectory of length >= t.
// Throws NoOverlap when the set lacks a label.
std::size_t compute_tmax(const CalibrationSet& dre);

// Fits the per-step classifiers. The parallel path distributes the
// independent step fits over OpenMP threads; both paths return identical
// models.
RatioModel fit_ratio_model(const CalibrationSet& dre, const FitConfig& cfg = {}, Exec exec = Exec::parallel);

// ((1 - f) / f) * (prior / (1 - prior)).
double plug_in_ratio(double class_prob, double prior_1) noexcept;

// M̂_t for a prefix of length t. Throws EmptyPrefix.
double eval_ratio(const RatioModel& model, std::span<const double> prefix);

// [M̂_1, ..., M̂_T] for a whole sequence.
std::vector<double> eval_process(const RatioModel& model, std::span<const double> scores);
inline std::vector<double> eval_process(const RatioModel& model, const ScoreSequence& seq) {
    return eval_process(model, seq.values());
}

}  // namespace evaluator
