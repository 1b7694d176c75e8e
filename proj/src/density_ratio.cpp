#include "evaluator/density_ratio.hpp"

#include <algorithm>
#include <exception>
#include <string>

#include "evaluator/error.hpp"

namespace evaluator {

void RatioModel::check() const {
    fit_config.check();
    if (t_max < 1 || step_models.size() != t_max) {
        throw Error(ErrorCode::DimensionMismatch, "ratio model must hold exactly t_max step models");
    }
    if (!(prior_1 > 0.0 && prior_1 < 1.0)) {
        throw Error(ErrorCode::OutOfRange, "class prior must lie strictly inside (0, 1)");
    }
    for (std::size_t t = 0; t < t_max; ++t) {
        if (step_models[t].dim() != t + 1) {
            throw Error(ErrorCode::DimensionMismatch,
                        "step model " + std::to_string(t + 1) + " has dimension " +
                            std::to_string(step_models[t].dim()));
        }
    }
}

double estimate_prior(const CalibrationSet& dre) {
    if (!dre.has_both_labels()) {
        throw Error(ErrorCode::SingleClassData, "class prior needs both labels in the ratio-fitting set");
    }
    return static_cast<double>(dre.count(Label::successful)) / static_cast<double>(dre.size());
}

std::size_t compute_tmax(const CalibrationSet& dre) {
    std::size_t longest_null = 0;
    std::size_t longest_alt = 0;
    for (const auto& item : dre.items) {
        auto& longest = item.is_null() ? longest_null : longest_alt;
        longest = std::max(longest, item.length());
    }
    const std::size_t t_max = std::min(longest_null, longest_alt);
    if (t_max == 0) {
        throw Error(ErrorCode::NoOverlap, "no step at which both labels are observed");
    }
    return t_max;
}

namespace {

LogisticModel fit_step(const CalibrationSet& dre, std::size_t t, const FitConfig& cfg) {
    std::size_t rows = 0;
    for (const auto& item : dre.items) rows += item.length() >= t ? 1 : 0;

    FeatureMatrix features(rows, t);
    std::vector<int> labels;
    labels.reserve(rows);
    std::size_t r = 0;
    for (const auto& item : dre.items) {
        if (item.length() < t) continue;
        const auto prefix = item.sequence.values().first(t);
        std::copy(prefix.begin(), prefix.end(), features.row(r++).begin());
        labels.push_back(to_int(item.label));
    }
    return fit_logistic(features, labels, cfg);
}

}  // namespace

RatioModel fit_ratio_model(const CalibrationSet& dre, const FitConfig& cfg, Exec exec) {
    cfg.check();
    RatioModel model;
    model.prior_1 = estimate_prior(dre);
    model.t_max = compute_tmax(dre);
    model.fit_config = cfg;
    model.step_models.resize(model.t_max);

    const auto steps = static_cast<long>(model.t_max);
    if (exec == Exec::serial) {
        for (long t = 0; t < steps; ++t) {
            model.step_models[static_cast<std::size_t>(t)] = fit_step(dre, static_cast<std::size_t>(t) + 1, cfg);
        }
        return model;
    }

    std::vector<std::exception_ptr> failures(model.t_max);
#pragma omp parallel for schedule(dynamic)
    for (long t = 0; t < steps; ++t) {
        const auto idx = static_cast<std::size_t>(t);
        try {
            model.step_models[idx] = fit_step(dre, idx + 1, cfg);
        } catch (...) {
            failures[idx] = std::current_exception();
        }
    }
    for (const auto& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }
    return model;
}

double plug_in_ratio(double class_prob, double prior_1) noexcept {
    return ((1.0 - class_prob) / class_prob) * (prior_1 / (1.0 - prior_1));
}

double eval_ratio(const RatioModel& model, std::span<const double> prefix) {
    if (prefix.empty()) throw Error(ErrorCode::EmptyPrefix, "density ratio needs at least one score");
    const std::size_t t = std::min(prefix.size(), model.t_max);
    const double f = predict_proba(model.step_models[t - 1], prefix.first(t), model.fit_config.prob_clamp);
    return plug_in_ratio(f, model.prior_1);
}

std::vector<double> eval_process(const RatioModel& model, std::span<const double> scores) {
    std::vector<double> process;
    process.reserve(scores.size());
    for (std::size_t t = 1; t <= scores.size(); ++t) {
        if (t > model.t_max && !process.empty()) {
            process.push_back(process.back());
            continue;
        }
        process.push_back(eval_ratio(model, scores.first(t)));
    }
    return process;
}

}  // namespace evaluator
