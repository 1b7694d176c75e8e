#include "evaluator/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <memory>
#include <numeric>
#include <ostream>

#include "evaluator/density_ratio.hpp"
#include "evaluator/error.hpp"
#include "evaluator/monitor.hpp"
#include "evaluator/thresholds.hpp"

namespace evaluator {

std::string_view to_string(Method method) {
    switch (method) {
        case Method::evaluator_pac: return "evaluator_pac";
        case Method::evaluator_ville: return "evaluator_ville";
        case Method::bonferroni: return "bonferroni";
        case Method::raw: return "raw";
        case Method::calibrated: return "calibrated";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    for (Method m : all_methods()) {
        if (to_string(m) == name) return m;
    }
    throw Error(ErrorCode::Usage, "unknown method '" + std::string(name) + "'");
}

std::vector<Method> all_methods() {
    return {Method::evaluator_pac, Method::evaluator_ville, Method::bonferroni, Method::raw, Method::calibrated};
}

void ExperimentConfig::check() const {
    if (alpha_grid.empty()) throw Error(ErrorCode::Usage, "alpha grid is empty");
    for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
        if (!(alpha_grid[i] > 0.0 && alpha_grid[i] < 1.0) || (i > 0 && alpha_grid[i] <= alpha_grid[i - 1])) {
            throw Error(ErrorCode::Usage, "alpha grid must be strictly increasing inside (0, 1)");
        }
    }
    if (n_splits < 1) throw Error(ErrorCode::Usage, "need at least one split");
    if (!(cal_fraction > 0.0 && cal_fraction < 1.0)) throw Error(ErrorCode::Usage, "cal fraction must lie in (0, 1)");
    if (!(dre_fraction > 0.0 && dre_fraction < 1.0)) throw Error(ErrorCode::Usage, "DRE fraction must lie in (0, 1)");
    if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorCode::Usage, "delta must lie in (0, 1)");
    if (methods.empty()) throw Error(ErrorCode::Usage, "no methods requested");
    fit.check();
}

std::uint64_t split_seed(const ExperimentConfig& cfg, int index) {
    return derive_seed(cfg.seed, static_cast<std::uint64_t>(index));
}

namespace {

bool uses_ratio(Method m) {
    return m == Method::evaluator_pac || m == Method::evaluator_ville || m == Method::bonferroni;
}

// Everything a split calibrates, plus per-test-trajectory statistic paths.
struct PreparedSplit {
    CalibrationSet cal;
    CalibrationSet test;
    std::vector<std::vector<double>> ratio_paths;
    std::vector<double> null_maxima;
    std::vector<std::vector<double>> calibrated_paths;
    std::int64_t t_cal_max = 0;
    std::uint64_t tie_seed = 0;
};

PreparedSplit prepare_split(const CalibrationSet& data, const ExperimentConfig& cfg, std::uint64_t seed) {
    PreparedSplit split;
    std::tie(split.cal, split.test) = split_calibration(data, SplitConfig{cfg.cal_fraction, seed});
    split.t_cal_max = static_cast<std::int64_t>(split.cal.max_length());
    split.tie_seed = derive_seed(seed, 2);

    const bool any_ratio = std::any_of(cfg.methods.begin(), cfg.methods.end(), uses_ratio);
    const bool calibrated =
        std::find(cfg.methods.begin(), cfg.methods.end(), Method::calibrated) != cfg.methods.end();

    if (any_ratio) {
        auto [dre, thresh] = split_calibration(split.cal, SplitConfig{cfg.dre_fraction, derive_seed(seed, 1)});
        std::function<std::vector<double>(std::span<const double>)> process = cfg.process_override;
        if (!process) {
            auto model = std::make_shared<const RatioModel>(fit_ratio_model(dre, cfg.fit, Exec::serial));
            process = [model](std::span<const double> scores) { return eval_process(*model, scores); };
        }
        for (const auto& item : thresh.items) {
            if (!item.is_null()) continue;
            const auto path = process(item.sequence.values());
            split.null_maxima.push_back(*std::max_element(path.begin(), path.end()));
        }
        if (split.null_maxima.empty()) {
            throw Error(ErrorCode::NoNullTrajectories, "threshold side has no successful trajectories");
        }
        split.ratio_paths.reserve(split.test.size());
        for (const auto& item : split.test.items) split.ratio_paths.push_back(process(item.sequence.values()));
    }
    if (calibrated) {
        const auto iso = fit_pooled_isotonic(split.cal);
        split.calibrated_paths.reserve(split.test.size());
        for (const auto& item : split.test.items) {
            std::vector<double> path;
            for (double s : item.sequence.values()) path.push_back((*iso)(s));
            split.calibrated_paths.push_back(std::move(path));
        }
    }
    return split;
}

// Rejection step (if any) for every test trajectory.
std::vector<std::optional<std::size_t>> rejections(const PreparedSplit& split, const ExperimentConfig& cfg,
                                                   Method method, double alpha) {
    const std::vector<std::vector<double>>* paths = nullptr;
    double threshold = 0.0;
    auto direction = Direction::reject_at_or_above;
    switch (method) {
        case Method::evaluator_pac:
            paths = &split.ratio_paths;
            threshold = pac_threshold(split.null_maxima, alpha, cfg.delta, split.tie_seed).value;
            break;
        case Method::evaluator_ville:
            paths = &split.ratio_paths;
            threshold = ville_threshold(alpha).value;
            break;
        case Method::bonferroni:
            paths = &split.ratio_paths;
            threshold = bonferroni_threshold(alpha, split.t_cal_max).value;
            break;
        case Method::raw:
            direction = Direction::reject_below;
            threshold = alpha;
            break;
        case Method::calibrated:
            paths = &split.calibrated_paths;
            direction = Direction::reject_below;
            threshold = alpha;
            break;
    }
    std::vector<std::optional<std::size_t>> out;
    out.reserve(split.test.size());
    for (std::size_t i = 0; i < split.test.size(); ++i) {
        const auto path = paths ? std::span<const double>((*paths)[i]) : split.test.items[i].sequence.values();
        out.push_back(first_crossing(path, threshold, direction));
    }
    return out;
}

}  // namespace

SplitResult evaluate_split(const CalibrationSet& data, const ExperimentConfig& cfg, std::uint64_t seed) {
    cfg.check();
    const PreparedSplit split = prepare_split(data, cfg, seed);
    const auto n_null = static_cast<double>(split.test.count(Label::successful));
    const auto n_alt = static_cast<double>(split.test.count(Label::unsuccessful));

    SplitResult result;
    result.split_seed = seed;
    result.methods = cfg.methods;
    for (Method method : cfg.methods) {
        std::vector<double> far;
        std::vector<double> power;
        for (double alpha : cfg.alpha_grid) {
            const auto rejected = rejections(split, cfg, method, alpha);
            double false_alarms = 0.0;
            double detections = 0.0;
            for (std::size_t i = 0; i < rejected.size(); ++i) {
                if (!rejected[i]) continue;
                (split.test.items[i].is_null() ? false_alarms : detections) += 1.0;
            }
            far.push_back(false_alarms / n_null);
            power.push_back(detections / n_alt);
        }
        result.far.push_back(std::move(far));
        result.power.push_back(std::move(power));
    }
    return result;
}

std::vector<SplitResult> run_splits(const CalibrationSet& data, const ExperimentConfig& cfg, Exec exec) {
    cfg.check();
    std::vector<SplitResult> results(static_cast<std::size_t>(cfg.n_splits));
    std::vector<std::exception_ptr> failures(results.size());
    const int count = cfg.n_splits;
    auto run_one = [&](int i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            results[idx] = evaluate_split(data, cfg, split_seed(cfg, i));
        } catch (...) {
            failures[idx] = std::current_exception();
        }
    };
    if (exec == Exec::serial) {
        for (int i = 0; i < count; ++i) run_one(i);
    } else {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < count; ++i) run_one(i);
    }
    for (const auto& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }
    return results;
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw Error(ErrorCode::OutOfRange, "percentile of an empty sample");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<CurvePoint> summarize(const std::vector<SplitResult>& splits, const ExperimentConfig& cfg) {
    if (splits.empty()) throw Error(ErrorCode::OutOfRange, "nothing to summarize");
    auto interval = [](const std::vector<double>& xs) {
        const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
        const double lo = std::min(percentile(xs, 0.025), mean);
        const double hi = std::max(percentile(xs, 0.975), mean);
        return std::array<double, 3>{mean, lo, hi};
    };

    std::vector<CurvePoint> points;
    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
        for (std::size_t a = 0; a < cfg.alpha_grid.size(); ++a) {
            std::vector<double> far;
            std::vector<double> power;
            for (const auto& split : splits) {
                far.push_back(split.far[m][a]);
                power.push_back(split.power[m][a]);
            }
            const auto f = interval(far);
            const auto p = interval(power);
            points.push_back({cfg.methods[m], cfg.alpha_grid[a], f[0], f[1], f[2], p[0], p[1], p[2]});
        }
    }
    return points;
}

std::vector<CurvePoint> run_experiment(const CalibrationSet& data, const ExperimentConfig& cfg, Exec exec) {
    return summarize(run_splits(data, cfg, exec), cfg);
}

std::vector<TokenCurvePoint> token_study(const CalibrationSet& data, const ExperimentConfig& cfg) {
    cfg.check();
    for (const auto& item : data.items) {
        if (!item.tokens) {
            throw Error(ErrorCode::MissingTokens, "trajectory '" + item.id + "' has no token counts");
        }
    }
    const PreparedSplit split = prepare_split(data, cfg, split_seed(cfg, 0));
    const auto n_test = static_cast<double>(split.test.size());

    std::int64_t total_tokens = 0;
    for (const auto& item : split.test.items) total_tokens += item.tokens->back();

    std::vector<TokenCurvePoint> points;
    points.push_back({"never_terminate", 0.0, total_tokens,
                      static_cast<double>(split.test.count(Label::successful)) / n_test});
    for (Method method : cfg.methods) {
        for (double alpha : cfg.alpha_grid) {
            const auto rejected = rejections(split, cfg, method, alpha);
            std::int64_t tokens = 0;
            double correct = 0.0;
            for (std::size_t i = 0; i < rejected.size(); ++i) {
                const auto& item = split.test.items[i];
                if (rejected[i]) {
                    tokens += (*item.tokens)[*rejected[i] - 1];
                } else {
                    tokens += item.tokens->back();
                    correct += item.is_null() ? 1.0 : 0.0;
                }
            }
            points.push_back({std::string(to_string(method)), alpha, tokens, correct / n_test});
        }
    }
    return points;
}

std::vector<AblationCell> calibration_ablation(const CalibrationSet& data, const ExperimentConfig& cfg,
                                               std::span<const double> fractions, Exec exec) {
    std::vector<AblationCell> cells;
    for (double fraction : fractions) {
        if (!(fraction > 0.0 && fraction < 1.0)) {
            throw Error(ErrorCode::Usage, "ablation fractions must lie in (0, 1)");
        }
        ExperimentConfig local = cfg;
        local.cal_fraction = fraction;
        AblationCell cell{fraction, {}, std::nullopt};
        try {
            cell.curve = run_experiment(data, local, exec);
        } catch (const Error& e) {
            cell.error = std::string(to_string(e.code())) + ": " + e.what();
        }
        cells.push_back(std::move(cell));
    }
    return cells;
}

std::string format_number(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

void write_curve_csv(std::ostream& out, std::span<const CurvePoint> points) {
    out << "method,alpha,far_mean,far_lo,far_hi,power_mean,power_lo,power_hi\n";
    for (const auto& p : points) {
        out << to_string(p.method) << ',' << format_number(p.alpha) << ',' << format_number(p.far_mean) << ','
            << format_number(p.far_lo) << ',' << format_number(p.far_hi) << ',' << format_number(p.power_mean) << ','
            << format_number(p.power_lo) << ',' << format_number(p.power_hi) << '\n';
    }
}

void write_token_csv(std::ostream& out, std::span<const TokenCurvePoint> points) {
    out << "method,alpha,tokens_used,accuracy\n";
    for (const auto& p : points) {
        out << p.method << ',' << format_number(p.alpha) << ',' << p.tokens_used << ',' << format_number(p.accuracy)
            << '\n';
    }
}

void write_ablation_csv(std::ostream& out, std::span<const AblationCell> cells) {
    out << "cal_fraction,method,alpha,far_mean,far_lo,far_hi,power_mean,power_lo,power_hi\n";
    for (const auto& cell : cells) {
        for (const auto& p : cell.curve) {
            out << format_number(cell.cal_fraction) << ',' << to_string(p.method) << ',' << format_number(p.alpha)
                << ',' << format_number(p.far_mean) << ',' << format_number(p.far_lo) << ','
                << format_number(p.far_hi) << ',' << format_number(p.power_mean) << ','
                << format_number(p.power_lo) << ',' << format_number(p.power_hi) << '\n';
        }
    }
}

}  // namespace evaluator
