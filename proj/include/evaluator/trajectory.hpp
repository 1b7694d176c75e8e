#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "evaluator/error.hpp"

namespace evaluator {

// Trajectory outcome. Successful trajectories are the null hypothesis.
enum class Label : std::uint8_t { unsuccessful = 0, successful = 1 };

constexpr int to_int(Label label) noexcept { return static_cast<int>(label); }

// Verifier scores S_1..S_T of one trajectory. Non-empty and finite.
class ScoreSequence {
public:
    explicit ScoreSequence(std::vector<double> scores);

    std::size_t size() const noexcept { return scores_.size(); }
    double operator[](std::size_t i) const { return scores_[i]; }
    std::span<const double> values() const noexcept { return scores_; }

    bool operator==(const ScoreSequence&) const = default;

private:
    std::vector<double> scores_;
};

// First t scores. Throws OutOfRange unless 1 <= t <= size.
ScoreSequence prefix(const ScoreSequence& seq, std::size_t t);

struct LabeledTrajectory {
    std::string id;
    ScoreSequence sequence;
    Label label;
    // Cumulative token counts, one per step, non-decreasing.
    std::optional<std::vector<std::int64_t>> tokens;

    std::size_t length() const noexcept { return sequence.size(); }
    bool is_null() const noexcept { return label == Label::successful; }
};

// Unvalidated form, as it comes off the wire.
struct TrajectoryRecord {
    std::string id;
    std::vector<double> scores;
    int label = -1;
    std::optional<std::vector<std::int64_t>> tokens;
};

LabeledTrajectory validate(const TrajectoryRecord& raw);

struct CalibrationSet {
    std::vector<LabeledTrajectory> items;

    std::size_t size() const noexcept { return items.size(); }
    bool empty() const noexcept { return items.empty(); }
    std::size_t count(Label label) const noexcept;
    bool has_both_labels() const noexcept {
        return count(Label::successful) > 0 && count(Label::unsuccessful) > 0;
    }
    std::size_t max_length() const noexcept;
};

struct SplitConfig {
    double dre_fraction = 0.5;
    std::uint64_t seed = 0;
};

// Stratified random partition. The first side receives round(fraction * n)
// items; each label is allotted proportionally and, where the counts allow,
// both sides keep at least one item of each label. Throws DegenerateSplit if
// a side would lack a label.
std::pair<CalibrationSet, CalibrationSet> split_calibration(const CalibrationSet& cal,
                                                            const SplitConfig& cfg);

}  // namespace evaluator
