#include <algorithm>
#include <random>

#include "doctest.h"
#include "evaluator/error.hpp"
#include "evaluator/isotonic.hpp"
#include "oracles.hpp"

using namespace evaluator;

TEST_SUITE("isotonic") {
    TEST_CASE("already monotone data is returned unchanged") {
        const std::vector<double> xs{1, 2, 3};
        const std::vector<double> ys{0, 1, 1};
        const auto m = fit_isotonic(xs, ys);
        CHECK(m.values() == std::vector<double>{0, 1, 1});
        CHECK(m.breakpoints() == xs);
    }

    TEST_CASE("violators are pooled") {
        const std::vector<double> xs{1, 2, 3};
        const std::vector<double> ys{1, 0, 1};
        CHECK(fit_isotonic(xs, ys).values() == oracle::monotone_least_squares(ys));
        CHECK(fit_isotonic(xs, ys).values() == std::vector<double>{0.5, 0.5, 1.0});

        const std::vector<double> xs2{1, 2};
        const std::vector<double> ys2{1, 0};
        CHECK(fit_isotonic(xs2, ys2).values() == std::vector<double>{0.5, 0.5});
    }

    TEST_CASE("unsorted input and tied xs") {
        const std::vector<double> xs{3, 1, 2, 1};
        const std::vector<double> ys{1, 1, 0, 0};
        const auto m = fit_isotonic(xs, ys);
        CHECK(m.breakpoints() == std::vector<double>{1, 2, 3});
        // Grouped means 0.5, 0, 1 -> pool the first two (weights 2 and 1).
        CHECK(m.values()[0] == doctest::Approx(1.0 / 3.0));
        CHECK(m.values()[1] == doctest::Approx(1.0 / 3.0));
        CHECK(m.values()[2] == 1.0);
    }

    TEST_CASE("length mismatch") {
        const std::vector<double> xs{1, 2};
        const std::vector<double> ys{1};
        try {
            fit_isotonic(xs, ys);
            FAIL("expected LengthMismatch");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::LengthMismatch);
        }
    }

    TEST_CASE("step function evaluation") {
        const IsotonicModel m({0.2, 0.8}, {0.1, 0.9});
        CHECK(apply_isotonic(m, 0.5) == 0.1);
        CHECK(apply_isotonic(m, 0.9) == 0.9);
        CHECK(apply_isotonic(m, 0.0) == 0.1);
        CHECK(apply_isotonic(m, 0.8) == 0.9);
    }

    TEST_CASE("model constructor enforces invariants") {
        CHECK_THROWS_AS(IsotonicModel({0.2, 0.2}, {0.1, 0.2}), Error);
        CHECK_THROWS_AS(IsotonicModel({0.1, 0.2}, {0.5, 0.4}), Error);
        CHECK_THROWS_AS(IsotonicModel({0.1}, {1.5}), Error);
        CHECK_THROWS_AS(IsotonicModel({0.1, 0.2}, {0.5}), Error);
    }

    TEST_CASE("PAVA equals brute force on random small instances") {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (int trial = 0; trial < 300; ++trial) {
            const std::size_t n = 1 + rng() % 6;
            std::vector<double> xs(n);
            std::vector<double> ys(n);
            for (std::size_t i = 0; i < n; ++i) {
                xs[i] = unif(rng);
                ys[i] = unif(rng) < 0.5 ? 1.0 : 0.0;
            }
            const auto m = fit_isotonic(xs, ys);
            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](auto a, auto b) { return xs[a] < xs[b]; });
            std::vector<double> sorted_y;
            for (auto i : order) sorted_y.push_back(ys[i]);
            const auto expected = oracle::monotone_least_squares(sorted_y);
            for (std::size_t i = 0; i < n; ++i) CHECK(m.values()[i] == doctest::Approx(expected[i]).epsilon(1e-9));
        }
    }

    TEST_CASE("fitted maps are non-decreasing") {
        std::mt19937_64 rng(23);
        std::uniform_real_distribution<double> unif(-1.0, 2.0);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> xs(40);
            std::vector<double> ys(40);
            for (std::size_t i = 0; i < xs.size(); ++i) {
                xs[i] = unif(rng);
                ys[i] = unif(rng) < xs[i] ? 1.0 : 0.0;
            }
            const auto m = fit_isotonic(xs, ys);
            double prev = -1.0;
            for (double s = -2.0; s <= 3.0; s += 0.01) {
                CHECK(m(s) >= prev);
                prev = m(s);
            }
        }
    }
}
