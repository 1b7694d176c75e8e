#include "evaluator/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "evaluator/error.hpp"

namespace evaluator {

using nlohmann::json;

namespace {

[[noreturn]] void parse_failure(std::size_t line, const std::string& what) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

json parse_line(const std::string& text, std::size_t line) {
    json record = json::parse(text, nullptr, false);
    if (record.is_discarded() || !record.is_object()) parse_failure(line, "not a JSON object");
    return record;
}

const json& require(const json& record, const char* field, std::size_t line) {
    const auto it = record.find(field);
    if (it == record.end()) parse_failure(line, std::string("missing field '") + field + "'");
    return *it;
}

template <class Fn>
void for_each_line(std::istream& in, Fn&& fn) {
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
        fn(text, line);
    }
}

std::vector<double> number_array(const json& value, const char* field, std::size_t line) {
    if (!value.is_array()) parse_failure(line, std::string("field '") + field + "' must be an array");
    std::vector<double> out;
    out.reserve(value.size());
    for (const auto& v : value) {
        if (!v.is_number()) parse_failure(line, std::string("field '") + field + "' must contain numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

TrajectoryRecord record_from_json(const json& j, std::size_t line) {
    TrajectoryRecord raw;
    const auto& id = require(j, "id", line);
    if (id.is_string()) {
        raw.id = id.get<std::string>();
    } else if (id.is_number_integer()) {
        raw.id = id.dump();
    } else {
        parse_failure(line, "field 'id' must be a string");
    }
    raw.scores = number_array(require(j, "scores", line), "scores", line);
    const auto& label = require(j, "label", line);
    if (!label.is_number_integer()) parse_failure(line, "field 'label' must be an integer");
    raw.label = label.get<int>();
    if (const auto it = j.find("tokens"); it != j.end() && !it->is_null()) {
        if (!it->is_array()) parse_failure(line, "field 'tokens' must be an array");
        std::vector<std::int64_t> tokens;
        for (const auto& v : *it) {
            if (!v.is_number_integer()) parse_failure(line, "field 'tokens' must contain integers");
            tokens.push_back(v.get<std::int64_t>());
        }
        raw.tokens = std::move(tokens);
    }
    return raw;
}

json to_json(const LogisticModel& m) {
    return json{{"dim", m.dim()}, {"weights", m.weights}, {"intercept", m.intercept}};
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    return in;
}

}  // namespace

CalibrationSet read_dataset(std::istream& in) {
    CalibrationSet set;
    for_each_line(in, [&](const std::string& text, std::size_t line) {
        const TrajectoryRecord raw = record_from_json(parse_line(text, line), line);
        try {
            set.items.push_back(validate(raw));
        } catch (const Error& e) {
            throw Error(e.code(), "line " + std::to_string(line) + ": " + e.what());
        }
    });
    return set;
}

CalibrationSet read_dataset(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_dataset(in);
}

void write_dataset(std::ostream& out, const CalibrationSet& set) {
    for (const auto& item : set.items) {
        const auto values = item.sequence.values();
        json j{{"id", item.id},
               {"scores", std::vector<double>(values.begin(), values.end())},
               {"label", to_int(item.label)}};
        if (item.tokens) j["tokens"] = *item.tokens;
        out << j.dump() << '\n';
    }
}

double centipawn_to_prob(double centipawns) noexcept {
    return 0.5 * (2.0 / (1.0 + std::exp(-0.00368208 * centipawns)));
}

std::vector<ChessGameRecord> read_chess_games(std::istream& in) {
    std::vector<ChessGameRecord> games;
    for_each_line(in, [&](const std::string& text, std::size_t line) {
        const json j = parse_line(text, line);
        ChessGameRecord game;
        const auto& id = require(j, "id", line);
        game.id = id.is_string() ? id.get<std::string>() : id.dump();
        game.centipawns = number_array(require(j, "centipawns", line), "centipawns", line);
        const auto& result = require(j, "result", line);
        const std::string name = result.is_string() ? result.get<std::string>() : "";
        if (name == "white_win") {
            game.result = GameResult::white_win;
        } else if (name == "black_win") {
            game.result = GameResult::black_win;
        } else if (name == "draw") {
            game.result = GameResult::draw;
        } else {
            parse_failure(line, "field 'result' must be white_win, black_win or draw");
        }
        games.push_back(std::move(game));
    });
    return games;
}

CalibrationSet chess_to_dataset(const std::vector<ChessGameRecord>& games) {
    CalibrationSet set;
    set.items.reserve(games.size());
    for (const auto& game : games) {
        TrajectoryRecord raw;
        raw.id = game.id;
        raw.label = game.result == GameResult::white_win ? 1 : 0;
        raw.scores.reserve(game.centipawns.size());
        for (double cp : game.centipawns) {
            raw.scores.push_back(std::isfinite(cp) ? centipawn_to_prob(cp) : cp);
        }
        set.items.push_back(validate(raw));
    }
    return set;
}

std::string fnv1a_digest(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << hash;
    return out.str();
}

void write_artifact(std::ostream& out, const CalibrationArtifact& artifact) {
    const auto& model = artifact.model;
    const auto& th = artifact.threshold;
    const auto& meta = artifact.metadata;

    json steps = json::array();
    for (const auto& step : model.step_models) steps.push_back(to_json(step));

    json threshold{{"kind", std::string(to_string(th.kind))}, {"alpha", th.alpha}, {"value", th.value}};
    if (th.kind == ThresholdKind::pac) {
        threshold["delta"] = th.delta;
        threshold["n_null"] = th.n_null;
        threshold["k_index"] = th.k_index;
    }
    if (th.kind == ThresholdKind::bonferroni) threshold["t_cal_max"] = th.t_cal_max;

    json doc{
        {"format", std::string(artifact_format)},
        {"version", artifact_version},
        {"ratio_model",
         {{"t_max", model.t_max},
          {"prior_1", model.prior_1},
          {"fit_config",
           {{"l2_lambda", model.fit_config.l2_lambda},
            {"max_iters", model.fit_config.max_iters},
            {"tolerance", model.fit_config.tolerance},
            {"prob_clamp", model.fit_config.prob_clamp}}},
          {"step_models", steps}}},
        {"threshold", threshold},
        {"metadata",
         {{"seed", meta.seed},
          {"dre_fraction", meta.dre_fraction},
          {"data_digest", meta.data_digest},
          {"n_trajectories", meta.n_trajectories},
          {"n_dre", meta.n_dre},
          {"n_threshold", meta.n_threshold}}},
    };
    out << doc.dump(2) << '\n';
}

CalibrationArtifact read_artifact(std::istream& in) {
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw Error(ErrorCode::ParseError, "calibration artifact is not valid JSON");
    }
    try {
        if (doc.at("format").get<std::string>() != artifact_format) {
            throw Error(ErrorCode::ParseError, "not an evaluator calibration artifact");
        }
        if (doc.at("version").get<int>() != artifact_version) {
            throw Error(ErrorCode::ParseError, "unsupported artifact version " + doc.at("version").dump());
        }
        CalibrationArtifact artifact;
        const auto& rm = doc.at("ratio_model");
        artifact.model.t_max = rm.at("t_max").get<std::size_t>();
        artifact.model.prior_1 = rm.at("prior_1").get<double>();
        const auto& fc = rm.at("fit_config");
        artifact.model.fit_config = FitConfig{fc.at("l2_lambda").get<double>(), fc.at("max_iters").get<int>(),
                                              fc.at("tolerance").get<double>(), fc.at("prob_clamp").get<double>()};
        for (const auto& step : rm.at("step_models")) {
            LogisticModel m;
            m.weights = step.at("weights").get<std::vector<double>>();
            m.intercept = step.at("intercept").get<double>();
            if (step.at("dim").get<std::size_t>() != m.dim()) {
                throw Error(ErrorCode::DimensionMismatch, "step model dimension does not match its weights");
            }
            artifact.model.step_models.push_back(std::move(m));
        }
        artifact.model.check();

        const auto& th = doc.at("threshold");
        auto& spec = artifact.threshold;
        spec.kind = parse_threshold_kind(th.at("kind").get<std::string>());
        spec.alpha = th.at("alpha").get<double>();
        spec.value = th.at("value").get<double>();
        spec.delta = th.value("delta", default_delta);
        spec.n_null = th.value("n_null", std::int64_t{0});
        spec.k_index = th.value("k_index", std::int64_t{0});
        spec.t_cal_max = th.value("t_cal_max", std::int64_t{0});
        if (!(spec.value > 0.0) || !std::isfinite(spec.value)) {
            throw Error(ErrorCode::ParseError, "threshold value must be positive and finite");
        }

        const auto& meta = doc.at("metadata");
        artifact.metadata.seed = meta.at("seed").get<std::uint64_t>();
        artifact.metadata.dre_fraction = meta.at("dre_fraction").get<double>();
        artifact.metadata.data_digest = meta.at("data_digest").get<std::string>();
        artifact.metadata.n_trajectories = meta.at("n_trajectories").get<std::int64_t>();
        artifact.metadata.n_dre = meta.at("n_dre").get<std::int64_t>();
        artifact.metadata.n_threshold = meta.at("n_threshold").get<std::int64_t>();
        return artifact;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("malformed calibration artifact: ") + e.what());
    }
}

SyntheticSpec parse_synthetic_spec(std::istream& in) {
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) throw Error(ErrorCode::ParseError, "synthetic spec is not a JSON object");
    SyntheticSpec spec;
    try {
        spec.mu_null = doc.value("mu_null", spec.mu_null);
        spec.mu_alt = doc.value("mu_alt", spec.mu_alt);
        spec.sigma = doc.value("sigma", spec.sigma);
        spec.stop_prob = doc.value("stop_prob", spec.stop_prob);
        spec.prior_1 = doc.value("prior_1", spec.prior_1);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("malformed synthetic spec: ") + e.what());
    }
    spec.check();
    return spec;
}

}  // namespace evaluator
