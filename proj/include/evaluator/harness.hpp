#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evaluator/execution.hpp"
#include "evaluator/logistic.hpp"
#include "evaluator/trajectory.hpp"

namespace evaluator {

enum class Method { evaluator_pac, evaluator_ville, bonferroni, raw, calibrated };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);
std::vector<Method> all_methods();

struct ExperimentConfig {
    std::vector<double> alpha_grid{0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
    int n_splits = 50;
    double cal_fraction = 0.2;
    double delta = 0.05;
    std::uint64_t seed = 0;
    std::vector<Method> methods = all_methods();
    double dre_fraction = 0.5;
    FitConfig fit;
    // Replaces the fitted ratio process for the three evaluator methods, e.g.
    // with the exact process of a synthetic oracle.
    std::function<std::vector<double>(std::span<const double>)> process_override;

    void check() const;
};

// One split's false alarm rate and power, indexed [method][alpha].
struct SplitResult {
    std::uint64_t split_seed = 0;
    std::vector<Method> methods;
    std::vector<std::vector<double>> far;
    std::vector<std::vector<double>> power;
};

struct CurvePoint {
    Method method;
    double alpha;
    double far_mean, far_lo, far_hi;
    double power_mean, power_lo, power_hi;
};

struct TokenCurvePoint {
    std::string method;
    double alpha;
    std::int64_t tokens_used;
    double accuracy;
};

// Seed of split i under the experiment's master seed.
std::uint64_t split_seed(const ExperimentConfig& cfg, int index);

// Calibrates every requested method on a cal_fraction side of the data and
// replays it on the rest. Throws DegenerateSplit.
SplitResult evaluate_split(const CalibrationSet& data, const ExperimentConfig& cfg, std::uint64_t split_seed);

// All n_splits splits, in index order. The parallel path runs splits on
// OpenMP threads; results are identical to the serial path.
std::vector<SplitResult> run_splits(const CalibrationSet& data, const ExperimentConfig& cfg,
                                    Exec exec = Exec::parallel);

// Mean and 2.5 / 97.5 empirical percentiles (linear interpolation) across
// splits, widened if needed so that lo <= mean <= hi.
std::vector<CurvePoint> summarize(const std::vector<SplitResult>& splits, const ExperimentConfig& cfg);

std::vector<CurvePoint> run_experiment(const CalibrationSet& data, const ExperimentConfig& cfg,
                                       Exec exec = Exec::parallel);

// Tokens spent and accuracy retained when rejected trajectories are stopped
// at their rejection step. Uses the split with index 0. The first point is
// the never-terminate baseline (method "never_terminate", alpha 0). Throws
// MissingTokens.
std::vector<TokenCurvePoint> token_study(const CalibrationSet& data, const ExperimentConfig& cfg);

struct AblationCell {
    double cal_fraction;
    std::vector<CurvePoint> curve;
    std::optional<std::string> error;  // set when this fraction failed
};

std::vector<AblationCell> calibration_ablation(const CalibrationSet& data, const ExperimentConfig& cfg,
                                               std::span<const double> fractions, Exec exec = Exec::parallel);

// Linear-interpolation percentile of unsorted values, q in [0, 1].
double percentile(std::vector<double> values, double q);

void write_curve_csv(std::ostream& out, std::span<const CurvePoint> points);
void write_token_csv(std::ostream& out, std::span<const TokenCurvePoint> points);
void write_ablation_csv(std::ostream& out, std::span<const AblationCell> cells);

// Shortest round-trip decimal form.
std::string format_number(double value);

}  // namespace evaluator
