#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace evaluator {

struct FitConfig {
    double l2_lambda = 1.0;
    int max_iters = 100;
    double tolerance = 1e-8;
    double prob_clamp = 1e-6;

    void check() const;
};

struct LogisticModel {
    std::vector<double> weights;
    double intercept = 0.0;

    std::size_t dim() const noexcept { return weights.size(); }
};

// Dense row-major design matrix.
class FeatureMatrix {
public:
    FeatureMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    // Throws DimensionMismatch on ragged input.
    static FeatureMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

// Penalized negative log-likelihood
//   sum_i [log(1 + exp(z_i)) - y_i z_i] + lambda * |w|^2,  z_i = w.x_i + b
// with params laid out as (w_1..w_d, b). The intercept is not penalized.
double logistic_objective(const FeatureMatrix& x, std::span<const int> labels, double l2_lambda,
                          std::span<const double> params);
std::vector<double> logistic_gradient(const FeatureMatrix& x, std::span<const int> labels, double l2_lambda,
                                      std::span<const double> params);

// Damped Newton (iteratively reweighted least squares) with step halving.
// Stops once the max-norm of the gradient is at most cfg.tolerance or after
// cfg.max_iters iterations.
LogisticModel fit_logistic(const FeatureMatrix& x, std::span<const int> labels, const FitConfig& cfg = {});
LogisticModel fit_logistic(const std::vector<std::vector<double>>& features, std::span<const int> labels,
                           const FitConfig& cfg = {});

double sigmoid(double z) noexcept;

// sigmoid(w.x + b) clamped into [prob_clamp, 1 - prob_clamp].
double predict_proba(const LogisticModel& model, std::span<const double> x, double prob_clamp = 1e-6);

}  // namespace evaluator
