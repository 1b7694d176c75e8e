#include "evaluator/monitor.hpp"

#include <cmath>
#include <string>

#include "evaluator/error.hpp"

namespace evaluator {

namespace {

void check_threshold(double threshold) {
    if (!std::isfinite(threshold)) throw Error(ErrorCode::OutOfRange, "decision threshold must be finite");
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

}  // namespace

DecisionRule DecisionRule::ratio(std::shared_ptr<const RatioModel> model, double threshold) {
    if (!model) throw Error(ErrorCode::OutOfRange, "ratio rule needs a fitted model");
    check_threshold(threshold);
    if (!(threshold > 0.0)) throw Error(ErrorCode::OutOfRange, "ratio threshold must be positive");
    return DecisionRule(EstimatedRatio{std::move(model)}, threshold, Direction::reject_at_or_above);
}

DecisionRule DecisionRule::raw(double alpha) {
    check_threshold(alpha);
    return DecisionRule(RawScore{}, alpha, Direction::reject_below);
}

DecisionRule DecisionRule::calibrated(std::shared_ptr<const IsotonicModel> model, double alpha) {
    if (!model) throw Error(ErrorCode::OutOfRange, "calibrated rule needs a fitted isotonic map");
    check_threshold(alpha);
    return DecisionRule(CalibratedScore{std::move(model)}, alpha, Direction::reject_below);
}

double DecisionRule::evaluate(std::span<const double> prefix) const {
    if (prefix.empty()) throw Error(ErrorCode::EmptyPrefix, "decision rule needs at least one score");
    return std::visit(overloaded{
                          [&](const EstimatedRatio& s) { return eval_ratio(*s.model, prefix); },
                          [&](const RawScore&) { return prefix.back(); },
                          [&](const CalibratedScore& s) { return (*s.model)(prefix.back()); },
                      },
                      statistic_);
}

Status MonitorState::observe(double score) {
    if (status_.phase != Status::Phase::active) {
        throw Error(ErrorCode::MonitorClosed, "monitor already reached a decision at step " +
                                                  std::to_string(status_.step));
    }
    if (!std::isfinite(score)) throw Error(ErrorCode::InvalidTrajectory, "observed score is not finite");
    observed_.push_back(score);
    status_.step = observed_.size();
    if (rule_.fires(rule_.evaluate(observed_))) status_.phase = Status::Phase::rejected;
    return status_;
}

Status MonitorState::finalize() noexcept {
    if (status_.phase == Status::Phase::active) {
        status_.phase = Status::Phase::accepted;
        status_.step = observed_.size();
    }
    return status_;
}

OfflineResult run_offline(const DecisionRule& rule, const LabeledTrajectory& traj) {
    MonitorState state(rule);
    for (double score : traj.sequence.values()) {
        if (state.observe(score).phase == Status::Phase::rejected) break;
    }
    OfflineResult result{state.finalize(), std::nullopt};
    if (result.status.phase == Status::Phase::rejected) result.rejection_step = result.status.step;
    return result;
}

std::optional<std::size_t> first_crossing(std::span<const double> statistics, double threshold,
                                          Direction direction) noexcept {
    for (std::size_t t = 0; t < statistics.size(); ++t) {
        const bool fired = direction == Direction::reject_at_or_above ? statistics[t] >= threshold
                                                                      : statistics[t] < threshold;
        if (fired) return t + 1;
    }
    return std::nullopt;
}

std::shared_ptr<const IsotonicModel> fit_pooled_isotonic(const CalibrationSet& cal) {
    if (!cal.has_both_labels()) {
        throw Error(ErrorCode::SingleClassData, "calibrated verifier needs both labels in the calibration set");
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& item : cal.items) {
        for (double s : item.sequence.values()) {
            xs.push_back(s);
            ys.push_back(static_cast<double>(to_int(item.label)));
        }
    }
    return std::make_shared<const IsotonicModel>(fit_isotonic(xs, ys));
}

DecisionRule make_calibrated_rule(const CalibrationSet& cal, double alpha) {
    return DecisionRule::calibrated(fit_pooled_isotonic(cal), alpha);
}

}  // namespace evaluator
