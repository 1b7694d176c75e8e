#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "evaluator/density_ratio.hpp"
#include "evaluator/isotonic.hpp"
#include "evaluator/trajectory.hpp"

namespace evaluator {

struct EstimatedRatio {
    std::shared_ptr<const RatioModel> model;
};
struct RawScore {};
struct CalibratedScore {
    std::shared_ptr<const IsotonicModel> model;
};

using Statistic = std::variant<EstimatedRatio, RawScore, CalibratedScore>;

enum class Direction { reject_at_or_above, reject_below };

// A statistic paired with a threshold. The ratio statistic rejects when it
// reaches the threshold (>=); score statistics reject when they drop strictly
// below it (<). The factories enforce that pairing.
class DecisionRule {
public:
    static DecisionRule ratio(std::shared_ptr<const RatioModel> model, double threshold);
    static DecisionRule raw(double alpha);
    static DecisionRule calibrated(std::shared_ptr<const IsotonicModel> model, double alpha);

    const Statistic& statistic() const noexcept { return statistic_; }
    double threshold() const noexcept { return threshold_; }
    Direction direction() const noexcept { return direction_; }

    // Statistic value after observing the given (non-empty) prefix.
    double evaluate(std::span<const double> prefix) const;
    bool fires(double value) const noexcept {
        return direction_ == Direction::reject_at_or_above ? value >= threshold_ : value < threshold_;
    }

private:
    DecisionRule(Statistic statistic, double threshold, Direction direction)
        : statistic_(std::move(statistic)), threshold_(threshold), direction_(direction) {}

    Statistic statistic_;
    double threshold_;
    Direction direction_;
};

struct Status {
    enum class Phase { active, rejected, accepted };
    Phase phase = Phase::active;
    std::size_t step = 0;

    bool operator==(const Status&) const = default;
};

// Streaming state for one trajectory. Single owner; not for concurrent use.
class MonitorState {
public:
    explicit MonitorState(DecisionRule rule) : rule_(std::move(rule)) {}

    // Appends a score and tests the rule on the new prefix. Throws
    // MonitorClosed after a terminal status.
    Status observe(double score);

    // Accepts if still active; a no-op on terminal states.
    Status finalize() noexcept;

    const Status& status() const noexcept { return status_; }
    std::size_t step() const noexcept { return observed_.size(); }
    const DecisionRule& rule() const noexcept { return rule_; }

private:
    DecisionRule rule_;
    std::vector<double> observed_;
    Status status_;
};

struct OfflineResult {
    Status status;
    std::optional<std::size_t> rejection_step;
};

// Replays a recorded trajectory through a MonitorState.
OfflineResult run_offline(const DecisionRule& rule, const LabeledTrajectory& traj);

// First 1-based step whose precomputed statistic fires, if any.
std::optional<std::size_t> first_crossing(std::span<const double> statistics, double threshold,
                                          Direction direction) noexcept;

// Isotonic map fitted on every (score, trajectory label) pair pooled over
// steps, thresholded strictly below alpha. Throws SingleClassData.
DecisionRule make_calibrated_rule(const CalibrationSet& cal, double alpha);
std::shared_ptr<const IsotonicModel> fit_pooled_isotonic(const CalibrationSet& cal);

}  // namespace evaluator
