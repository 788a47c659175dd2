#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "cogito/model.hpp"
#include "cogito/semantic_matcher.hpp"

namespace cogito {

struct CliOptions {
  std::filesystem::path scenario_path;
  std::optional<BackendMode> backend;
  std::filesystem::path out_dir = "out";
  std::optional<std::int64_t> max_cycles;
  std::optional<std::uint64_t> seed;
  std::optional<double> sigma;
  bool save_color = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitBackend = 3;

// Loads the scenario, runs the loop and writes trace.json, ranking.txt and
// the sketch PGMs into out_dir. Never throws; the outcome is the exit code.
int run(const CliOptions& options, std::ostream& out, std::ostream& err);

// "{text} - Similarity: {score:.4f}" per entry, listed in the order of
// `sentences`, the top-ranked entry suffixed with " *".
// Throws UnknownSentenceId.
std::string format_ranking(const Ranking& ranking, std::span<const Sentence> sentences);

}  // namespace cogito
