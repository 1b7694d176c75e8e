#include "evaluator/isotonic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "evaluator/error.hpp"

namespace evaluator {

IsotonicModel::IsotonicModel(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (breakpoints_.size() != values_.size() || breakpoints_.empty()) {
        throw Error(ErrorCode::LengthMismatch, "isotonic model needs equal, non-zero numbers of breakpoints and values");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!(values_[i] >= 0.0 && values_[i] <= 1.0) || !std::isfinite(breakpoints_[i])) {
            throw Error(ErrorCode::OutOfRange, "isotonic values must lie in [0, 1]");
        }
        if (i > 0 && (breakpoints_[i] <= breakpoints_[i - 1] || values_[i] < values_[i - 1])) {
            throw Error(ErrorCode::OutOfRange, "isotonic breakpoints must increase strictly and values must not decrease");
        }
    }
}

double IsotonicModel::operator()(double s) const noexcept {
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), s);
    if (it == breakpoints_.begin()) return values_.front();
    return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

IsotonicModel fit_isotonic(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.empty()) {
        throw Error(ErrorCode::LengthMismatch, "isotonic fit got " + std::to_string(xs.size()) + " xs and " +
                                                   std::to_string(ys.size()) + " ys");
    }

    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i]) || !(ys[i] >= 0.0 && ys[i] <= 1.0)) {
            throw Error(ErrorCode::OutOfRange, "isotonic fit needs finite xs and ys in [0, 1]");
        }
    }

    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });

    struct Block {
        double sum;
        double weight;
        std::size_t first_group;
        double mean() const { return sum / weight; }
    };

    std::vector<double> group_x;
    std::vector<Block> blocks;
    for (std::size_t idx : order) {
        if (!group_x.empty() && xs[idx] == group_x.back()) {
            blocks.back().sum += ys[idx];
            blocks.back().weight += 1.0;
        } else {
            group_x.push_back(xs[idx]);
            blocks.push_back({ys[idx], 1.0, group_x.size() - 1});
        }
        // The tie merge above may itself create a violation, so pool after either branch.
        while (blocks.size() > 1 && blocks[blocks.size() - 2].mean() > blocks.back().mean()) {
            const Block last = blocks.back();
            blocks.pop_back();
            blocks.back().sum += last.sum;
            blocks.back().weight += last.weight;
        }
    }

    std::vector<double> values(group_x.size());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const std::size_t end = b + 1 < blocks.size() ? blocks[b + 1].first_group : group_x.size();
        const double value = blocks[b].mean();
        std::fill(values.begin() + static_cast<std::ptrdiff_t>(blocks[b].first_group),
                  values.begin() + static_cast<std::ptrdiff_t>(end), value);
    }
    return IsotonicModel(std::move(group_x), std::move(values));
}

}  // namespace evaluator
