#include <cmath>
#include <numeric>

#include "doctest.h"
#include "evaluator/synthetic.hpp"
#include "oracles.hpp"

using namespace evaluator;

TEST_SUITE("synthetic") {
    TEST_CASE("stop probability one gives single-step trajectories") {
        SyntheticSpec spec;
        spec.stop_prob = 1.0;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            CHECK(sample_trajectory(spec, Label::successful, seed).length() == 1);
        }
    }

    TEST_CASE("sampling is a pure function of the seed") {
        const SyntheticSpec spec;
        const auto a = sample_trajectory(spec, Label::unsuccessful, 42);
        const auto b = sample_trajectory(spec, Label::unsuccessful, 42);
        CHECK(a.sequence == b.sequence);

        const auto serial = sample_dataset(spec, 500, 3, Exec::serial);
        const auto parallel = sample_dataset(spec, 500, 3, Exec::parallel);
        REQUIRE(serial.size() == parallel.size());
        for (std::size_t i = 0; i < serial.size(); ++i) {
            CHECK(serial.items[i].sequence == parallel.items[i].sequence);
            CHECK(serial.items[i].label == parallel.items[i].label);
            CHECK(serial.items[i].id == parallel.items[i].id);
        }
    }

    TEST_CASE("step-one scores center on the label mean") {
        const SyntheticSpec spec;
        const auto nulls = sample_labeled(spec, Label::successful, 10000, 8);
        double sum = 0.0;
        for (const auto& item : nulls.items) sum += item.sequence[0];
        CHECK(std::abs(sum / 10000.0 - spec.mu_null) <= 4.0 * spec.sigma / 100.0);
    }

    TEST_CASE("dataset label frequency and mean length") {
        const SyntheticSpec spec;
        const auto data = sample_dataset(spec, 20000, 12);
        const double frac = static_cast<double>(data.count(Label::successful)) / 20000.0;
        CHECK(std::abs(frac - spec.prior_1) <= 4.0 * std::sqrt(0.24 / 20000.0));
        double len = 0.0;
        for (const auto& item : data.items) len += static_cast<double>(item.length());
        // Geometric with q = 0.25: mean 4, variance 12.
        CHECK(std::abs(len / 20000.0 - 4.0) <= 4.0 * std::sqrt(12.0 / 20000.0));
    }

    TEST_CASE("exact ratio identities") {
        const SyntheticSpec spec;
        const double mid = 0.5 * (spec.mu_null + spec.mu_alt);
        for (double v : true_ratio_process(spec, std::vector<double>{mid, mid, mid})) CHECK(v == 1.0);

        SyntheticSpec unit;
        unit.mu_null = 0.0;
        unit.mu_alt = 1.0;
        unit.sigma = 1.0;
        const auto m = true_ratio_process(unit, std::vector<double>{1.0});
        CHECK(m[0] == doctest::Approx(1.6487212707001282).epsilon(1e-15));
        // Same value from the two Gaussian densities directly.
        CHECK(m[0] == doctest::Approx(oracle::normal_pdf(1.0, 1.0, 1.0) / oracle::normal_pdf(1.0, 0.0, 1.0))
                          .epsilon(1e-14));

        SyntheticSpec swapped = spec;
        std::swap(swapped.mu_null, swapped.mu_alt);
        const std::vector<double> scores{0.1, 0.55, 0.93, 0.4};
        const auto forward = true_ratio_process(spec, scores);
        const auto backward = true_ratio_process(swapped, scores);
        for (std::size_t t = 0; t < scores.size(); ++t) CHECK(std::abs(forward[t] * backward[t] - 1.0) <= 1e-12);
    }

    TEST_CASE("exact ratio is the product of per-step density ratios") {
        const SyntheticSpec spec;
        const std::vector<double> scores{0.62, 0.35, 0.8};
        const auto m = true_ratio_process(spec, scores);
        double product = 1.0;
        for (std::size_t t = 0; t < scores.size(); ++t) {
            product *= oracle::normal_pdf(scores[t], spec.mu_alt, spec.sigma) /
                       oracle::normal_pdf(scores[t], spec.mu_null, spec.sigma);
            CHECK(m[t] == doctest::Approx(product).epsilon(1e-12));
        }
    }

    TEST_CASE("toy marginal calibration example") {
        const auto toy = toy_marginal_example();
        CHECK(toy.base_rate == 0.00995);
        CHECK(toy.alpha == 0.01);
        CHECK(toy.far == doctest::Approx(0.49748743718592964).epsilon(1e-12));
        CHECK(toy.far / toy.alpha == doctest::Approx(49.748743718592964).epsilon(1e-12));
    }

    TEST_CASE("invalid specs are rejected") {
        SyntheticSpec spec;
        spec.sigma = 0.0;
        CHECK_THROWS(spec.check());
        spec = {};
        spec.mu_alt = spec.mu_null;
        CHECK_THROWS(spec.check());
        spec = {};
        spec.stop_prob = 0.0;
        CHECK_THROWS(spec.check());
    }
}
