#include <cmath>
#include <sstream>

#include "doctest.h"
#include "evaluator/error.hpp"
#include "evaluator/harness.hpp"
#include "evaluator/synthetic.hpp"
#include "test_helpers.hpp"

using namespace evaluator;
using testing_support::traj;
using testing_support::traj_with_tokens;

namespace {

CalibrationSet constant_scores(std::size_t per_label, double null_score, double alt_score) {
    CalibrationSet set;
    for (std::size_t i = 0; i < per_label; ++i) {
        set.items.push_back(traj({null_score, null_score}, 1, "n" + std::to_string(i)));
        set.items.push_back(traj({alt_score}, 0, "a" + std::to_string(i)));
    }
    return set;
}

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.alpha_grid = {0.1, 0.3, 0.5};
    cfg.n_splits = 4;
    cfg.cal_fraction = 0.5;
    cfg.seed = 17;
    return cfg;
}

// Statistic that is huge for scores below 0.5 and tiny otherwise.
std::vector<double> step_oracle(std::span<const double> scores) {
    std::vector<double> out;
    for (double s : scores) out.push_back(s < 0.5 ? 1e12 : 1e-12);
    return out;
}

}  // namespace

TEST_SUITE("harness") {
    TEST_CASE("a method that never rejects") {
        const auto data = constant_scores(10, 1.5, 1.2);
        auto cfg = small_config();
        cfg.methods = {Method::raw};
        const auto r = evaluate_split(data, cfg, 3);
        for (std::size_t a = 0; a < cfg.alpha_grid.size(); ++a) {
            CHECK(r.far[0][a] == 0.0);
            CHECK(r.power[0][a] == 0.0);
        }
    }

    TEST_CASE("a method that always rejects at step one") {
        const auto data = constant_scores(10, 0.0, 0.0);
        auto cfg = small_config();
        cfg.methods = {Method::raw};
        const auto r = evaluate_split(data, cfg, 3);
        for (std::size_t a = 0; a < cfg.alpha_grid.size(); ++a) {
            CHECK(r.far[0][a] == 1.0);
            CHECK(r.power[0][a] == 1.0);
        }
    }

    TEST_CASE("Ville with the exact ratio controls the false alarm rate") {
        const SyntheticSpec spec;
        const auto data = sample_dataset(spec, 10000, 55);
        ExperimentConfig cfg;
        cfg.alpha_grid = {0.05, 0.1, 0.2, 0.5};
        cfg.methods = {Method::evaluator_ville};
        cfg.process_override = [spec](std::span<const double> s) { return true_ratio_process(spec, s); };
        const auto r = evaluate_split(data, cfg, 1);
        const double n_null = 0.8 * 10000 * spec.prior_1;
        for (std::size_t a = 0; a < cfg.alpha_grid.size(); ++a) {
            const double alpha = cfg.alpha_grid[a];
            CHECK(r.far[0][a] <= alpha + 3.0 * std::sqrt(alpha * (1.0 - alpha) / n_null));
        }
    }

    TEST_CASE("single split gives a degenerate interval") {
        const auto data = sample_dataset(SyntheticSpec{}, 600, 2);
        auto cfg = small_config();
        cfg.n_splits = 1;
        for (const auto& p : run_experiment(data, cfg)) {
            CHECK(p.far_lo == p.far_mean);
            CHECK(p.far_hi == p.far_mean);
            CHECK(p.power_lo == p.power_mean);
            CHECK(p.power_hi == p.power_mean);
        }
    }

    TEST_CASE("split seeds are indexed") {
        const auto data = sample_dataset(SyntheticSpec{}, 600, 2);
        auto cfg = small_config();
        cfg.n_splits = 3;
        const auto three = run_splits(data, cfg);
        cfg.n_splits = 6;
        const auto six = run_splits(data, cfg);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(three[i].split_seed == six[i].split_seed);
            CHECK(three[i].far == six[i].far);
            CHECK(three[i].power == six[i].power);
        }
    }

    TEST_CASE("serial and parallel split runs agree") {
        const auto data = sample_dataset(SyntheticSpec{}, 800, 9);
        auto cfg = small_config();
        cfg.n_splits = 5;
        const auto serial = run_splits(data, cfg, Exec::serial);
        const auto parallel = run_splits(data, cfg, Exec::parallel);
        for (std::size_t i = 0; i < serial.size(); ++i) {
            CHECK(serial[i].far == parallel[i].far);
            CHECK(serial[i].power == parallel[i].power);
        }
    }

    TEST_CASE("per-split orderings hold") {
        const auto data = sample_dataset(SyntheticSpec{}, 2000, 4);
        ExperimentConfig cfg;
        cfg.alpha_grid = {0.05, 0.1, 0.2, 0.3, 0.5, 0.7};
        cfg.n_splits = 6;
        const auto splits = run_splits(data, cfg);
        const auto idx = [&](Method m) {
            return static_cast<std::size_t>(std::find(cfg.methods.begin(), cfg.methods.end(), m) - cfg.methods.begin());
        };
        for (const auto& s : splits) {
            for (std::size_t a = 0; a < cfg.alpha_grid.size(); ++a) {
                CHECK(s.power[idx(Method::bonferroni)][a] <= s.power[idx(Method::evaluator_ville)][a]);
                CHECK(s.far[idx(Method::bonferroni)][a] <= s.far[idx(Method::evaluator_ville)][a]);
            }
            for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
                for (std::size_t a = 1; a < cfg.alpha_grid.size(); ++a) {
                    CHECK(s.far[m][a] >= s.far[m][a - 1]);
                    CHECK(s.power[m][a] >= s.power[m][a - 1]);
                }
            }
        }
    }

    TEST_CASE("PAC false alarm rate stays near alpha on synthetic data") {
        const auto data = sample_dataset(SyntheticSpec{}, 5000, 6);
        ExperimentConfig cfg;
        cfg.alpha_grid = {0.1, 0.2, 0.3, 0.5};
        cfg.n_splits = 10;
        cfg.methods = {Method::evaluator_pac};
        for (const auto& p : run_experiment(data, cfg)) {
            INFO("alpha=" << p.alpha << " far=" << p.far_mean);
            CHECK(p.far_mean <= p.alpha + 0.02);
            CHECK(p.far_lo <= p.far_mean);
            CHECK(p.far_mean <= p.far_hi);
        }
    }

    TEST_CASE("degenerate data is reported") {
        const auto data = constant_scores(1, 0.5, 0.5);
        try {
            evaluate_split(data, small_config(), 0);
            FAIL("expected DegenerateSplit");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::DegenerateSplit);
        }
    }

    TEST_CASE("token study with no rejections") {
        CalibrationSet data;
        for (int i = 0; i < 6; ++i) {
            data.items.push_back(traj_with_tokens({1.5, 1.5}, i % 3 == 0 ? 0 : 1, {10, 30}));
        }
        auto cfg = small_config();
        cfg.methods = {Method::raw};
        const auto points = token_study(data, cfg);
        REQUIRE(points.size() == 1 + cfg.alpha_grid.size());
        CHECK(points[0].method == "never_terminate");
        for (const auto& p : points) {
            CHECK(p.tokens_used == points[0].tokens_used);
            CHECK(p.accuracy == points[0].accuracy);
        }
        CHECK(points[0].tokens_used == 30 * 3);
        CHECK(points[0].accuracy == doctest::Approx(2.0 / 3.0));
    }

    TEST_CASE("oracle rule keeps all accuracy at minimal tokens") {
        CalibrationSet data;
        for (int i = 0; i < 10; ++i) {
            if (i % 2) {
                data.items.push_back(traj_with_tokens({0.9, 0.9, 0.9}, 1, {10, 20, 30}));
            } else {
                data.items.push_back(traj_with_tokens({0.1, 0.1, 0.1}, 0, {7, 14, 21}));
            }
        }
        auto cfg = small_config();
        cfg.methods = {Method::evaluator_ville};
        cfg.process_override = step_oracle;
        const auto points = token_study(data, cfg);
        // Test side: 5 trajectories, stratified 2/3 or 3/2.
        for (std::size_t i = 1; i < points.size(); ++i) {
            CHECK(points[i].accuracy == points[0].accuracy);
            CHECK(points[i].tokens_used < points[0].tokens_used);
        }
    }

    TEST_CASE("rejection at step t is charged tokens[t - 1]") {
        CalibrationSet data;
        for (int i = 0; i < 4; ++i) {
            data.items.push_back(traj_with_tokens({0.9, 0.0, 0.9}, 0, {10, 25, 40}));
            data.items.push_back(traj_with_tokens({0.9, 0.9, 0.9}, 1, {5, 7, 9}));
        }
        auto cfg = small_config();
        cfg.methods = {Method::raw};
        const auto points = token_study(data, cfg);
        CHECK(points[0].tokens_used == 2 * 40 + 2 * 9);
        for (std::size_t i = 1; i < points.size(); ++i) {
            CHECK(points[i].tokens_used == 2 * 25 + 2 * 9);
            CHECK(points[i].accuracy == 0.5);
        }
    }

    TEST_CASE("token study needs token counts") {
        const auto data = constant_scores(5, 0.5, 0.5);
        try {
            token_study(data, small_config());
            FAIL("expected MissingTokens");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::MissingTokens);
        }
    }

    TEST_CASE("ablation at one fraction equals the experiment") {
        const auto data = sample_dataset(SyntheticSpec{}, 800, 21);
        auto cfg = small_config();
        cfg.cal_fraction = 0.2;
        const std::vector<double> fractions{0.2};
        const auto cells = calibration_ablation(data, cfg, fractions);
        REQUIRE(cells.size() == 1);
        CHECK(!cells[0].error);
        const auto direct = run_experiment(data, cfg);
        REQUIRE(direct.size() == cells[0].curve.size());
        for (std::size_t i = 0; i < direct.size(); ++i) {
            CHECK(direct[i].far_mean == cells[0].curve[i].far_mean);
            CHECK(direct[i].power_hi == cells[0].curve[i].power_hi);
        }
    }

    TEST_CASE("a failing ablation cell does not sink the others") {
        const auto data = sample_dataset(SyntheticSpec{}, 300, 21);
        auto cfg = small_config();
        const std::vector<double> fractions{0.005, 0.5};
        const auto cells = calibration_ablation(data, cfg, fractions);
        REQUIRE(cells.size() == 2);
        CHECK(cells[0].error.has_value());
        CHECK(cells[0].curve.empty());
        CHECK(!cells[1].error);
        CHECK(!cells[1].curve.empty());
    }

    TEST_CASE("percentile interpolates linearly") {
        CHECK(percentile({3.0, 1.0, 2.0}, 0.5) == 2.0);
        CHECK(percentile({0.0, 10.0}, 0.25) == 2.5);
        CHECK(percentile({4.0}, 0.975) == 4.0);
    }

    TEST_CASE("CSV headers") {
        std::ostringstream curve;
        write_curve_csv(curve, std::vector<CurvePoint>{{Method::raw, 0.1, 0.0, 0.0, 0.0, 0.5, 0.25, 0.75}});
        CHECK(curve.str() == "method,alpha,far_mean,far_lo,far_hi,power_mean,power_lo,power_hi\n"
                             "raw,0.1,0,0,0,0.5,0.25,0.75\n");
        std::ostringstream tokens;
        write_token_csv(tokens, std::vector<TokenCurvePoint>{{"raw", 0.2, 1234, 0.5}});
        CHECK(tokens.str() == "method,alpha,tokens_used,accuracy\nraw,0.2,1234,0.5\n");
    }

    TEST_CASE("method names round-trip") {
        for (Method m : all_methods()) CHECK(parse_method(to_string(m)) == m);
        CHECK_THROWS_AS(parse_method("nope"), Error);
    }
}
