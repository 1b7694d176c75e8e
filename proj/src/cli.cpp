#include "evaluator/cli.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <system_error>

#include "CLI11.hpp"

#include "evaluator/density_ratio.hpp"
#include "evaluator/error.hpp"
#include "evaluator/harness.hpp"
#include "evaluator/io.hpp"
#include "evaluator/monitor.hpp"
#include "evaluator/synthetic.hpp"
#include "evaluator/thresholds.hpp"

namespace evaluator {

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Writes to a file, or to the given stream when path is "-".
template <class Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& fn) {
    if (path == "-") {
        fn(fallback);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
    fn(file);
    if (!file) throw Error(ErrorCode::Io, "write to '" + path + "' failed");
}

struct ExperimentFlags {
    std::string data;
    std::vector<double> alphas{0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
    int splits = 50;
    double cal_fraction = 0.2;
    std::vector<std::string> methods;
    std::uint64_t seed = 0;
    double delta = default_delta;
    double dre_fraction = 0.5;
    std::string out = "-";

    void attach(CLI::App* cmd, bool with_splits) {
        cmd->add_option("--data", data, "trajectory JSONL file")->required();
        cmd->add_option("--alphas", alphas, "comma-separated alpha grid")->delimiter(',');
        if (with_splits) cmd->add_option("--splits", splits, "number of random splits")->check(CLI::PositiveNumber);
        cmd->add_option("--cal-fraction", cal_fraction, "fraction of data used for calibration");
        cmd->add_option("--methods", methods,
                        "comma-separated subset of evaluator_pac,evaluator_ville,bonferroni,raw,calibrated")
            ->delimiter(',');
        cmd->add_option("--seed", seed, "master seed");
        cmd->add_option("--delta", delta, "PAC confidence parameter");
        cmd->add_option("--dre-fraction", dre_fraction, "share of the calibration side used for ratio fitting");
        cmd->add_option("--out", out, "output CSV path, - for stdout");
    }

    ExperimentConfig config() const {
        ExperimentConfig cfg;
        cfg.alpha_grid = alphas;
        cfg.n_splits = splits;
        cfg.cal_fraction = cal_fraction;
        cfg.seed = seed;
        cfg.delta = delta;
        cfg.dre_fraction = dre_fraction;
        if (!methods.empty()) {
            cfg.methods.clear();
            for (const auto& m : methods) cfg.methods.push_back(parse_method(m));
        }
        cfg.check();
        return cfg;
    }
};

int run_calibrate(const std::string& data_path, double alpha, double delta, const std::string& kind_name,
                  double dre_fraction, std::uint64_t seed, const std::string& out_path, std::ostream& out) {
    const ThresholdKind kind = parse_threshold_kind(kind_name);
    const std::string bytes = slurp(data_path);
    std::istringstream in(bytes);
    const CalibrationSet data = read_dataset(in);

    auto [dre, thresh] = split_calibration(data, SplitConfig{dre_fraction, seed});
    CalibrationArtifact artifact;
    artifact.model = fit_ratio_model(dre);
    switch (kind) {
        case ThresholdKind::ville:
            artifact.threshold = ville_threshold(alpha);
            break;
        case ThresholdKind::bonferroni:
            artifact.threshold = bonferroni_threshold(alpha, static_cast<std::int64_t>(data.max_length()));
            break;
        case ThresholdKind::pac: {
            const auto maxima = null_maxima(artifact.model, thresh);
            artifact.threshold = pac_threshold(maxima, alpha, delta, derive_seed(seed, 2));
            break;
        }
    }
    artifact.metadata = ArtifactMetadata{seed,
                                         dre_fraction,
                                         fnv1a_digest(bytes),
                                         static_cast<std::int64_t>(data.size()),
                                         static_cast<std::int64_t>(dre.size()),
                                         static_cast<std::int64_t>(thresh.size())};
    emit(out_path, out, [&](std::ostream& os) { write_artifact(os, artifact); });
    if (out_path != "-") {
        out << "calibrated t_max=" << artifact.model.t_max << " prior_1=" << format_number(artifact.model.prior_1)
            << " threshold=" << to_string(artifact.threshold.kind)
            << " value=" << format_number(artifact.threshold.value) << '\n';
    }
    return exit_code::accept;
}

int run_monitor(const std::string& model_path, std::istream& in, std::ostream& out) {
    std::ifstream file(model_path, std::ios::binary);
    if (!file) throw Error(ErrorCode::Io, "cannot open '" + model_path + "'");
    const CalibrationArtifact artifact = read_artifact(file);
    auto model = std::make_shared<const RatioModel>(artifact.model);
    MonitorState state(DecisionRule::ratio(model, artifact.threshold.value));

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        double score = 0.0;
        const char* begin = line.data() + first;
        const char* end = line.data() + last + 1;
        const auto [ptr, ec] = std::from_chars(begin, end, score);
        if (ec != std::errc() || ptr != end) {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": not a number");
        }
        const Status status = state.observe(score);
        if (status.phase == Status::Phase::rejected) {
            out << "REJECT t=" << status.step << std::endl;
            return exit_code::reject;
        }
        out << "CONTINUE" << std::endl;
    }
    const Status status = state.finalize();
    out << "ACCEPT t=" << status.step << std::endl;
    return exit_code::accept;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sequential accept/reject monitoring of agent trajectories from verifier scores", "evaluator"};
    app.require_subcommand(1);

    // calibrate
    std::string cal_data;
    double cal_alpha = 0.0;
    double cal_delta = default_delta;
    std::string cal_kind = "pac";
    double cal_dre = 0.5;
    std::uint64_t cal_seed = 0;
    std::string cal_out;
    auto* calibrate = app.add_subcommand("calibrate", "fit the ratio model and decision threshold");
    calibrate->add_option("--data", cal_data, "trajectory JSONL file")->required();
    calibrate->add_option("--alpha", cal_alpha, "false alarm level")->required();
    calibrate->add_option("--delta", cal_delta, "PAC confidence parameter");
    calibrate->add_option("--threshold", cal_kind, "pac, ville or bonferroni");
    calibrate->add_option("--dre-fraction", cal_dre, "share of data used for ratio fitting");
    calibrate->add_option("--seed", cal_seed, "split and tie-breaking seed");
    calibrate->add_option("--out", cal_out, "calibration artifact path")->required();

    // monitor
    std::string model_path;
    auto* monitor = app.add_subcommand("monitor", "stream scores from stdin, one per line");
    monitor->add_option("--model", model_path, "calibration artifact")->required();

    ExperimentFlags eval_flags;
    auto* evaluate = app.add_subcommand("evaluate", "false alarm rate and power curves over random splits");
    eval_flags.attach(evaluate, true);

    ExperimentFlags token_flags;
    auto* tokens = app.add_subcommand("tokens", "token budget versus accuracy");
    token_flags.attach(tokens, false);

    ExperimentFlags ablate_flags;
    std::vector<double> fractions;
    auto* ablate = app.add_subcommand("ablate", "repeat evaluate across calibration fractions");
    ablate_flags.attach(ablate, true);
    ablate->add_option("--fractions", fractions, "comma-separated calibration fractions")->required()->delimiter(',');

    std::string synth_spec;
    std::size_t synth_n = 0;
    std::uint64_t synth_seed = 0;
    std::string synth_out = "-";
    auto* synth = app.add_subcommand("synth", "sample a synthetic dataset with a known density ratio");
    synth->add_option("--spec", synth_spec, "JSON spec file (defaults if omitted)");
    synth->add_option("--n", synth_n, "number of trajectories")->required()->check(CLI::PositiveNumber);
    synth->add_option("--seed", synth_seed, "sampling seed");
    synth->add_option("--out", synth_out, "output JSONL path, - for stdout");

    std::string games_path;
    std::string chess_out = "-";
    auto* chess = app.add_subcommand("chess", "convert centipawn game records to trajectories");
    chess->add_option("--games", games_path, "game JSONL file")->required();
    chess->add_option("--out", chess_out, "output JSONL path, - for stdout");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return exit_code::accept;
        }
        err << "error code=Usage: " << e.what() << '\n';
        return exit_code::usage;
    }

    try {
        if (*calibrate) {
            return run_calibrate(cal_data, cal_alpha, cal_delta, cal_kind, cal_dre, cal_seed, cal_out, out);
        }
        if (*monitor) return run_monitor(model_path, in, out);
        if (*evaluate) {
            const auto cfg = eval_flags.config();
            const auto data = read_dataset(std::filesystem::path(eval_flags.data));
            const auto curve = run_experiment(data, cfg);
            emit(eval_flags.out, out, [&](std::ostream& os) { write_curve_csv(os, curve); });
            return exit_code::accept;
        }
        if (*tokens) {
            const auto cfg = token_flags.config();
            const auto data = read_dataset(std::filesystem::path(token_flags.data));
            const auto points = token_study(data, cfg);
            emit(token_flags.out, out, [&](std::ostream& os) { write_token_csv(os, points); });
            return exit_code::accept;
        }
        if (*ablate) {
            const auto cfg = ablate_flags.config();
            const auto data = read_dataset(std::filesystem::path(ablate_flags.data));
            const auto cells = calibration_ablation(data, cfg, fractions);
            bool any_ok = false;
            for (const auto& cell : cells) {
                if (cell.error) {
                    err << "error code=AblationCell fraction=" << format_number(cell.cal_fraction) << ": "
                        << *cell.error << '\n';
                } else {
                    any_ok = true;
                }
            }
            emit(ablate_flags.out, out, [&](std::ostream& os) { write_ablation_csv(os, cells); });
            return any_ok ? exit_code::accept : exit_code::failure;
        }
        if (*synth) {
            SyntheticSpec spec;
            if (!synth_spec.empty()) {
                std::istringstream spec_in(slurp(synth_spec));
                spec = parse_synthetic_spec(spec_in);
            }
            const auto data = sample_dataset(spec, synth_n, synth_seed);
            emit(synth_out, out, [&](std::ostream& os) { write_dataset(os, data); });
            return exit_code::accept;
        }
        if (*chess) {
            std::istringstream games_in(slurp(games_path));
            const auto data = chess_to_dataset(read_chess_games(games_in));
            emit(chess_out, out, [&](std::ostream& os) { write_dataset(os, data); });
            return exit_code::accept;
        }
    } catch (const InsufficientCalibration& e) {
        err << "error code=" << to_string(e.code()) << " min_n=" << e.min_required() << ": " << e.what() << '\n';
        return exit_code::insufficient_calibration;
    } catch (const Error& e) {
        err << "error code=" << to_string(e.code()) << ": " << e.what() << '\n';
        return e.code() == ErrorCode::Usage ? exit_code::usage : exit_code::failure;
    } catch (const std::exception& e) {
        err << "error code=Internal: " << e.what() << '\n';
        return exit_code::failure;
    }
    return exit_code::usage;
}

}  // namespace evaluator
