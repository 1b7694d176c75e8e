#include "evaluator/synthetic.hpp"

#include <cmath>
#include <random>
#include <string>

#include "evaluator/error.hpp"

namespace evaluator {

void SyntheticSpec::check() const {
    if (!(sigma > 0.0) || mu_null == mu_alt || !std::isfinite(mu_null) || !std::isfinite(mu_alt)) {
        throw Error(ErrorCode::OutOfRange, "synthetic spec needs sigma > 0 and distinct finite means");
    }
    if (!(stop_prob > 0.0 && stop_prob <= 1.0)) {
        throw Error(ErrorCode::OutOfRange, "stop probability must lie in (0, 1]");
    }
    if (!(prior_1 > 0.0 && prior_1 < 1.0)) {
        throw Error(ErrorCode::OutOfRange, "prior_1 must lie strictly inside (0, 1)");
    }
}

LabeledTrajectory sample_trajectory(const SyntheticSpec& spec, Label label, std::uint64_t seed) {
    spec.check();
    std::mt19937_64 rng(seed);
    std::size_t length = 1;
    if (spec.stop_prob < 1.0) {
        std::geometric_distribution<std::size_t> extra(spec.stop_prob);
        length += extra(rng);
    }
    std::normal_distribution<double> score(label == Label::successful ? spec.mu_null : spec.mu_alt, spec.sigma);
    std::vector<double> scores(length);
    for (auto& s : scores) s = score(rng);
    return LabeledTrajectory{"", ScoreSequence(std::move(scores)), label, std::nullopt};
}

namespace {

template <class LabelOf>
CalibrationSet sample_many(const SyntheticSpec& spec, std::size_t n, std::uint64_t seed, Exec exec,
                           LabelOf label_of) {
    spec.check();
    std::vector<std::optional<LabeledTrajectory>> slots(n);
    const auto count = static_cast<long>(n);
    auto draw = [&](long i) {
        const auto idx = static_cast<std::uint64_t>(i);
        const std::uint64_t sub = derive_seed(seed, idx);
        auto traj = sample_trajectory(spec, label_of(sub), derive_seed(sub, 0));
        traj.id = "synth-" + std::to_string(idx);
        slots[static_cast<std::size_t>(i)] = std::move(traj);
    };
    if (exec == Exec::serial) {
        for (long i = 0; i < count; ++i) draw(i);
    } else {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < count; ++i) draw(i);
    }
    CalibrationSet set;
    set.items.reserve(n);
    for (auto& slot : slots) set.items.push_back(std::move(*slot));
    return set;
}

}  // namespace

CalibrationSet sample_dataset(const SyntheticSpec& spec, std::size_t n, std::uint64_t seed, Exec exec) {
    return sample_many(spec, n, seed, exec, [&](std::uint64_t sub) {
        std::mt19937_64 rng(derive_seed(sub, 1));
        std::bernoulli_distribution is_null(spec.prior_1);
        return is_null(rng) ? Label::successful : Label::unsuccessful;
    });
}

CalibrationSet sample_labeled(const SyntheticSpec& spec, Label label, std::size_t n, std::uint64_t seed,
                              Exec exec) {
    return sample_many(spec, n, seed, exec, [label](std::uint64_t) { return label; });
}

std::vector<double> true_log_ratio_process(const SyntheticSpec& spec, std::span<const double> scores) {
    const double slope = (spec.mu_alt - spec.mu_null) / (spec.sigma * spec.sigma);
    const double midpoint = 0.5 * (spec.mu_alt + spec.mu_null);
    std::vector<double> log_ratio(scores.size());
    double running = 0.0;
    for (std::size_t t = 0; t < scores.size(); ++t) {
        running += slope * (scores[t] - midpoint);
        log_ratio[t] = running;
    }
    return log_ratio;
}

std::vector<double> true_ratio_process(const SyntheticSpec& spec, std::span<const double> scores) {
    auto process = true_log_ratio_process(spec, scores);
    for (auto& value : process) value = std::exp(value);
    return process;
}

ToyExample toy_marginal_example() {
    constexpr double low_score = 0.005;
    constexpr double high_score = 0.5;
    constexpr double p_low = 0.99;
    constexpr double p_high = 0.01;
    constexpr double alpha = 0.01;

    // p(Y = 1 | S = s) = s under marginal calibration.
    const double base_rate = low_score * p_low + high_score * p_high;
    // Only S = 0.005 falls at or below alpha.
    const double far = low_score * p_low / base_rate;
    return {far, alpha, base_rate};
}

}  // namespace evaluator
