#include "evaluator/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace evaluator {

namespace {

void require_scores(const std::vector<double>& scores, const std::string& id) {
    if (scores.empty()) {
        throw Error(ErrorCode::InvalidTrajectory, "trajectory '" + id + "': field 'scores' is empty");
    }
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!std::isfinite(scores[i])) {
            throw Error(ErrorCode::InvalidTrajectory, "trajectory '" + id + "': field 'scores' entry " +
                                                          std::to_string(i) + " is not finite");
        }
    }
}

}  // namespace

ScoreSequence::ScoreSequence(std::vector<double> scores) : scores_(std::move(scores)) {
    require_scores(scores_, "<anonymous>");
}

ScoreSequence prefix(const ScoreSequence& seq, std::size_t t) {
    if (t < 1 || t > seq.size()) {
        throw Error(ErrorCode::OutOfRange, "prefix length " + std::to_string(t) +
                                               " outside [1, " + std::to_string(seq.size()) + "]");
    }
    auto values = seq.values().first(t);
    return ScoreSequence(std::vector<double>(values.begin(), values.end()));
}

LabeledTrajectory validate(const TrajectoryRecord& raw) {
    require_scores(raw.scores, raw.id);
    if (raw.label != 0 && raw.label != 1) {
        throw Error(ErrorCode::InvalidTrajectory,
                    "trajectory '" + raw.id + "': field 'label' must be 0 or 1, got " + std::to_string(raw.label));
    }
    if (raw.tokens) {
        const auto& tokens = *raw.tokens;
        if (tokens.size() != raw.scores.size()) {
            throw Error(ErrorCode::InvalidTrajectory,
                        "trajectory '" + raw.id + "': field 'tokens' has " + std::to_string(tokens.size()) +
                            " entries but 'scores' has " + std::to_string(raw.scores.size()));
        }
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (tokens[i] < 0 || (i > 0 && tokens[i] < tokens[i - 1])) {
                throw Error(ErrorCode::InvalidTrajectory, "trajectory '" + raw.id + "': field 'tokens' entry " +
                                                              std::to_string(i) +
                                                              " is negative or decreasing");
            }
        }
    }
    return LabeledTrajectory{raw.id, ScoreSequence(raw.scores), static_cast<Label>(raw.label), raw.tokens};
}

std::size_t CalibrationSet::count(Label label) const noexcept {
    return static_cast<std::size_t>(
        std::count_if(items.begin(), items.end(), [label](const auto& item) { return item.label == label; }));
}

std::size_t CalibrationSet::max_length() const noexcept {
    std::size_t longest = 0;
    for (const auto& item : items) longest = std::max(longest, item.length());
    return longest;
}

std::pair<CalibrationSet, CalibrationSet> split_calibration(const CalibrationSet& cal, const SplitConfig& cfg) {
    if (!(cfg.dre_fraction > 0.0 && cfg.dre_fraction < 1.0)) {
        throw Error(ErrorCode::OutOfRange, "split fraction must lie strictly between 0 and 1");
    }
    if (cal.empty()) {
        throw Error(ErrorCode::DegenerateSplit, "cannot split an empty calibration set");
    }

    std::vector<std::size_t> nulls;
    std::vector<std::size_t> alts;
    for (std::size_t i = 0; i < cal.size(); ++i) {
        (cal.items[i].is_null() ? nulls : alts).push_back(i);
    }

    const auto n = static_cast<long>(cal.size());
    const long n_first = std::lround(cfg.dre_fraction * static_cast<double>(n));
    const auto n_null = static_cast<long>(nulls.size());
    const auto n_alt = static_cast<long>(alts.size());

    long first_null = std::clamp(std::lround(cfg.dre_fraction * static_cast<double>(n_null)), 1L,
                                 std::max(1L, n_null - 1));
    long first_alt = n_first - first_null;
    if (first_alt < 1) {
        first_alt = 1;
        first_null = n_first - 1;
    } else if (first_alt > n_alt - 1) {
        first_alt = n_alt - 1;
        first_null = n_first - first_alt;
    }
    if (first_null < 1 || first_null > n_null - 1 || first_alt < 1 || first_alt > n_alt - 1) {
        throw Error(ErrorCode::DegenerateSplit,
                    "split of " + std::to_string(n_null) + " successful / " + std::to_string(n_alt) +
                        " unsuccessful trajectories at fraction " + std::to_string(cfg.dre_fraction) +
                        " leaves a side without both labels");
    }

    std::mt19937_64 rng(cfg.seed);
    std::shuffle(nulls.begin(), nulls.end(), rng);
    std::shuffle(alts.begin(), alts.end(), rng);

    std::vector<char> in_first(cal.size(), 0);
    for (long i = 0; i < first_null; ++i) in_first[nulls[static_cast<std::size_t>(i)]] = 1;
    for (long i = 0; i < first_alt; ++i) in_first[alts[static_cast<std::size_t>(i)]] = 1;

    CalibrationSet first;
    CalibrationSet second;
    for (std::size_t i = 0; i < cal.size(); ++i) {
        (in_first[i] ? first : second).items.push_back(cal.items[i]);
    }
    return {std::move(first), std::move(second)};
}

}  // namespace evaluator
