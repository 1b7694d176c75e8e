#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "evaluator/execution.hpp"
#include "evaluator/trajectory.hpp"

namespace evaluator {

// Gaussian scores, i.i.d. within a trajectory, with a geometric length that
// does not depend on the label. The exact density ratio factorizes per step
// and its log is linear in the scores.
struct SyntheticSpec {
    double mu_null = 0.7;   // per-step mean for successful trajectories
    double mu_alt = 0.3;    // per-step mean for unsuccessful trajectories
    double sigma = 0.2;
    double stop_prob = 0.25;  // P(T = t) = q (1 - q)^(t - 1)
    double prior_1 = 0.6;

    void check() const;
};

LabeledTrajectory sample_trajectory(const SyntheticSpec& spec, Label label, std::uint64_t seed);

// n trajectories with labels drawn from prior_1. Trajectory i depends only on
// (seed, i), so serial and parallel sampling agree.
CalibrationSet sample_dataset(const SyntheticSpec& spec, std::size_t n, std::uint64_t seed,
                              Exec exec = Exec::parallel);

// n trajectories, all with the given label.
CalibrationSet sample_labeled(const SyntheticSpec& spec, Label label, std::size_t n, std::uint64_t seed,
                              Exec exec = Exec::parallel);

// Exact M_t = p_0(S_[1:t]) / p_1(S_[1:t]) for every t.
std::vector<double> true_log_ratio_process(const SyntheticSpec& spec, std::span<const double> scores);
std::vector<double> true_ratio_process(const SyntheticSpec& spec, std::span<const double> scores);

// Two-valued, marginally calibrated verifier: S in {0.005, 0.5} with
// P(S = 0.005) = 0.99. Rejecting when S <= alpha = 0.01 gives the false
// alarm rate below, far above alpha.
struct ToyExample {
    double far;
    double alpha;
    double base_rate;
};
ToyExample toy_marginal_example();

}  // namespace evaluator
