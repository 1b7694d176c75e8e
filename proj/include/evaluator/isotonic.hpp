#pragma once

#include <span>
#include <vector>

namespace evaluator {

// Right-continuous non-decreasing step function.
class IsotonicModel {
public:
    // breakpoints strictly increasing, values non-decreasing in [0, 1], equal
    // lengths, at least one point. Throws LengthMismatch / OutOfRange.
    IsotonicModel(std::vector<double> breakpoints, std::vector<double> values);

    const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
    const std::vector<double>& values() const noexcept { return values_; }

    // Value at the greatest breakpoint <= s; the first value below the range.
    double operator()(double s) const noexcept;

private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
};

// Least-squares non-decreasing fit of ys on xs by pool-adjacent-violators.
// Tied xs are pooled first, so the result has one breakpoint per distinct x.
IsotonicModel fit_isotonic(std::span<const double> xs, std::span<const double> ys);

inline double apply_isotonic(const IsotonicModel& model, double s) noexcept { return model(s); }

}  // namespace evaluator
