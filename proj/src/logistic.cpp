#include "evaluator/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "evaluator/error.hpp"

namespace evaluator {

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) noexcept {
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double linear_term(std::span<const double> row, std::span<const double> params) noexcept {
    const std::size_t d = row.size();
    double z = params[d];
    for (std::size_t j = 0; j < d; ++j) z += params[j] * row[j];
    return z;
}

void check_inputs(const FeatureMatrix& x, std::span<const int> labels) {
    if (labels.size() != x.rows()) {
        throw Error(ErrorCode::DimensionMismatch, std::to_string(x.rows()) + " feature rows but " +
                                                      std::to_string(labels.size()) + " labels");
    }
    std::size_t positives = 0;
    for (int y : labels) {
        if (y != 0 && y != 1) throw Error(ErrorCode::OutOfRange, "labels must be 0 or 1");
        positives += static_cast<std::size_t>(y);
    }
    if (positives == 0 || positives == labels.size()) {
        throw Error(ErrorCode::SingleClassData, "logistic fit needs at least one example of each label");
    }
}

void check_params(const FeatureMatrix& x, std::span<const double> params) {
    if (params.size() != x.cols() + 1) {
        throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(x.cols() + 1) + " parameters");
    }
}

}  // namespace

void FitConfig::check() const {
    if (!(l2_lambda >= 0.0) || max_iters < 1 || !(tolerance > 0.0) || !(prob_clamp > 0.0 && prob_clamp < 0.5)) {
        throw Error(ErrorCode::OutOfRange, "invalid logistic fit configuration");
    }
}

FeatureMatrix FeatureMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    FeatureMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) {
            throw Error(ErrorCode::DimensionMismatch, "feature row " + std::to_string(i) + " has dimension " +
                                                          std::to_string(rows[i].size()) + ", expected " +
                                                          std::to_string(cols));
        }
        std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
    }
    return m;
}

double logistic_objective(const FeatureMatrix& x, std::span<const int> labels, double l2_lambda,
                          std::span<const double> params) {
    check_params(x, params);
    double loss = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double z = linear_term(x.row(i), params);
        loss += softplus(z) - labels[i] * z;
    }
    for (std::size_t j = 0; j < x.cols(); ++j) loss += l2_lambda * params[j] * params[j];
    return loss;
}

std::vector<double> logistic_gradient(const FeatureMatrix& x, std::span<const int> labels, double l2_lambda,
                                      std::span<const double> params) {
    check_params(x, params);
    const std::size_t d = x.cols();
    std::vector<double> grad(d + 1, 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto row = x.row(i);
        const double residual = sigmoid(linear_term(row, params)) - labels[i];
        for (std::size_t j = 0; j < d; ++j) grad[j] += residual * row[j];
        grad[d] += residual;
    }
    for (std::size_t j = 0; j < d; ++j) grad[j] += 2.0 * l2_lambda * params[j];
    return grad;
}

LogisticModel fit_logistic(const FeatureMatrix& x, std::span<const int> labels, const FitConfig& cfg) {
    cfg.check();
    check_inputs(x, labels);

    const std::size_t d = x.cols();
    const auto p = static_cast<Eigen::Index>(d + 1);
    std::vector<double> params(d + 1, 0.0);
    double current = logistic_objective(x, labels, cfg.l2_lambda, params);

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        const auto grad = logistic_gradient(x, labels, cfg.l2_lambda, params);
        const double grad_norm = std::abs(*std::max_element(grad.begin(), grad.end(), [](double a, double b) {
            return std::abs(a) < std::abs(b);
        }));
        if (grad_norm <= cfg.tolerance) break;

        Eigen::MatrixXd hessian = Eigen::MatrixXd::Zero(p, p);
        Eigen::VectorXd features(p);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            const auto row = x.row(i);
            for (std::size_t j = 0; j < d; ++j) features[static_cast<Eigen::Index>(j)] = row[j];
            features[p - 1] = 1.0;
            const double prob = sigmoid(linear_term(row, params));
            hessian.selfadjointView<Eigen::Lower>().rankUpdate(features, prob * (1.0 - prob));
        }
        hessian = hessian.selfadjointView<Eigen::Lower>();
        for (Eigen::Index j = 0; j + 1 < p; ++j) hessian(j, j) += 2.0 * cfg.l2_lambda;

        const Eigen::Map<const Eigen::VectorXd> g(grad.data(), p);
        Eigen::LDLT<Eigen::MatrixXd> ldlt(hessian);
        Eigen::VectorXd step = ldlt.solve(g);
        if (ldlt.info() != Eigen::Success || !step.allFinite()) {
            // Separable data with no penalty: fall back to a scaled gradient step.
            step = g / std::max(1.0, g.cwiseAbs().maxCoeff());
        }

        double scale = 1.0;
        bool improved = false;
        std::vector<double> trial(d + 1);
        for (int halving = 0; halving < 60; ++halving) {
            for (std::size_t j = 0; j <= d; ++j) {
                trial[j] = params[j] - scale * step[static_cast<Eigen::Index>(j)];
            }
            const double value = logistic_objective(x, labels, cfg.l2_lambda, trial);
            if (value < current) {
                improved = true;
                params = trial;
                current = value;
                break;
            }
            scale *= 0.5;
        }
        if (!improved) break;
    }

    LogisticModel model;
    model.weights.assign(params.begin(), params.end() - 1);
    model.intercept = params.back();
    return model;
}

LogisticModel fit_logistic(const std::vector<std::vector<double>>& features, std::span<const int> labels,
                           const FitConfig& cfg) {
    return fit_logistic(FeatureMatrix::from_rows(features), labels, cfg);
}

double sigmoid(double z) noexcept {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double predict_proba(const LogisticModel& model, std::span<const double> x, double prob_clamp) {
    if (x.size() != model.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "model has dimension " + std::to_string(model.dim()) +
                                                      ", input has " + std::to_string(x.size()));
    }
    double z = model.intercept;
    for (std::size_t j = 0; j < x.size(); ++j) z += model.weights[j] * x[j];
    return std::clamp(sigmoid(z), prob_clamp, 1.0 - prob_clamp);
}

}  // namespace evaluator
