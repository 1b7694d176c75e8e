#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "evaluator/density_ratio.hpp"
#include "evaluator/synthetic.hpp"
#include "evaluator/thresholds.hpp"
#include "evaluator/trajectory.hpp"

namespace evaluator {

// ---- trajectories (JSON lines) ----
//
// One record per line:
//   {"id":"a","scores":[0.9,0.8],"label":1,"tokens":[120,260]}
// "tokens" is optional. Blank lines are skipped. Errors name the 1-based line.

CalibrationSet read_dataset(std::istream& in);
CalibrationSet read_dataset(const std::filesystem::path& path);
void write_dataset(std::ostream& out, const CalibrationSet& set);

// ---- chess ----

// White's win probability for a centipawn score (White-positive):
//   1/2 * (2 / (1 + exp(-0.00368208 s)))
double centipawn_to_prob(double centipawns) noexcept;

enum class GameResult { white_win, black_win, draw };

struct ChessGameRecord {
    std::string id;
    std::vector<double> centipawns;
    GameResult result;
};

// {"id":"g1","centipawns":[20,-15,40],"result":"white_win"} per line.
std::vector<ChessGameRecord> read_chess_games(std::istream& in);

// Scores are per-move win probabilities; only a White win is labeled 1.
CalibrationSet chess_to_dataset(const std::vector<ChessGameRecord>& games);

// ---- calibration artifact ----

struct ArtifactMetadata {
    std::uint64_t seed = 0;
    double dre_fraction = 0.5;
    std::string data_digest;  // FNV-1a 64 of the input bytes, hex
    std::int64_t n_trajectories = 0;
    std::int64_t n_dre = 0;
    std::int64_t n_threshold = 0;
};

struct CalibrationArtifact {
    RatioModel model;
    ThresholdSpec threshold;
    ArtifactMetadata metadata;
};

inline constexpr std::string_view artifact_format = "evaluator-calibration";
inline constexpr int artifact_version = 1;

// Self-describing JSON; doubles are written in shortest round-trip form so a
// read returns bit-identical values.
void write_artifact(std::ostream& out, const CalibrationArtifact& artifact);
CalibrationArtifact read_artifact(std::istream& in);

std::string fnv1a_digest(std::string_view bytes);

// ---- synthetic spec ----

// {"mu_null":0.7,"mu_alt":0.3,"sigma":0.2,"stop_prob":0.25,"prior_1":0.6};
// omitted fields keep their defaults.
SyntheticSpec parse_synthetic_spec(std::istream& in);

}  // namespace evaluator
