#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cogito/model.hpp"

namespace cogito {

struct BackendConfig {
  BackendMode mode = BackendMode::offline;
  std::optional<std::string> base_url;        // required iff mode == remote
  std::int64_t timeout_ms = 30000;
  std::int64_t retries = 0;
  std::int64_t embed_dim = 64;                // offline embedder only
  std::int64_t max_in_flight = 4;             // remote client concurrency cap
  std::optional<std::string> fixture_bundle;  // used in fixture mode

  friend bool operator==(const BackendConfig&, const BackendConfig&) = default;
};

// One entry of the offline generator's rule table: every trigger must occur
// in the prompt for the completion to be returned.
struct TemplateRule {
  std::vector<std::string> triggers;
  std::string completion;

  friend bool operator==(const TemplateRule&, const TemplateRule&) = default;
};

struct GenerationParams {
  std::int64_t max_length = 64;
  double temperature = 0.0;
  std::string delimiter = " - ";

  friend bool operator==(const GenerationParams&, const GenerationParams&) = default;
};

// A reasoning-query template. "{scene}" is replaced by the image descriptor.
struct QueryTemplate {
  QueryTemplateId id = QueryTemplateId::custom;
  std::string pattern;

  friend bool operator==(const QueryTemplate&, const QueryTemplate&) = default;
};

enum class ContextSource { fixture_file, perception_backend };

struct WhatIfInjection {
  std::uint64_t cycle_index = 0;
  Stimulus stimulus;

  friend bool operator==(const WhatIfInjection&, const WhatIfInjection&) = default;
};

struct ImageSize {
  std::int64_t height = 64;
  std::int64_t width = 64;

  friend bool operator==(const ImageSize&, const ImageSize&) = default;
};

struct ScenarioConfig {
  std::vector<Need> needs;
  ContextSource context_source = ContextSource::fixture_file;
  std::optional<std::string> fixture_path;
  std::optional<std::string> perception_image;
  std::int64_t max_cycles = 1;
  ImageSize image_size;
  double sigma = 3.0;
  std::uint64_t seed = 0;
  std::vector<WhatIfInjection> whatif_injections;

  BackendConfig backend;
  GenerationParams generation;
  double min_confidence = 0.8;
  std::int64_t capacity = 64;
  std::vector<TemplateRule> rules;            // empty = built-in table
  std::vector<std::string> custom_queries;    // extra reasoning templates

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

inline constexpr std::int64_t kMaxCycles = 1000;
inline constexpr std::int64_t kMinImageSide = 8;

struct Violation {
  std::string field;  // JSON-style path, e.g. "needs[0].text"
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

using ValidationReport = std::vector<Violation>;

// Reports every invariant violation; an empty report means the config is valid.
ValidationReport validate_scenario(const ScenarioConfig& config);

// Parses a scenario JSON file. Relative paths inside it are resolved against
// the file's directory. Throws Error{FileNotFound|ParseError}.
ScenarioConfig load_scenario(const std::filesystem::path& path);

// Applies COGITO_BACKEND_URL, COGITO_BACKEND_MODE and COGITO_TIMEOUT_MS.
void apply_backend_env(BackendConfig& config);

}  // namespace cogito
