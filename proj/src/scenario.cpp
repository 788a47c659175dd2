#include "cogito/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "cogito/error.hpp"
#include "cogito/serialization.hpp"

namespace cogito {
namespace {

std::string indexed(std::string_view field, std::size_t i) {
  return std::string(field) + "[" + std::to_string(i) + "]";
}

void check_backend(const BackendConfig& b, ValidationReport& out) {
  const bool remote = b.mode == BackendMode::remote;
  const bool has_url = b.base_url.has_value() && !trim(*b.base_url).empty();
  if (remote && !has_url) out.push_back({"backend.base_url", "required when mode is remote"});
  if (!remote && b.base_url.has_value()) out.push_back({"backend.base_url", "only allowed when mode is remote"});
  if (b.timeout_ms < 1) out.push_back({"backend.timeout_ms", "must be >= 1"});
  if (b.retries < 0) out.push_back({"backend.retries", "must be >= 0"});
  if (b.embed_dim < 2) out.push_back({"backend.embed_dim", "must be >= 2"});
  if (b.max_in_flight < 1) out.push_back({"backend.max_in_flight", "must be >= 1"});
  if (b.mode == BackendMode::fixture && !b.fixture_bundle) {
    out.push_back({"backend.fixture_bundle", "required when mode is fixture"});
  }
}

}  // namespace

ValidationReport validate_scenario(const ScenarioConfig& config) {
  ValidationReport out;

  std::set<std::string> need_ids;
  for (std::size_t i = 0; i < config.needs.size(); ++i) {
    const Need& need = config.needs[i];
    const auto base = indexed("needs", i);
    if (trim(need.text).empty()) out.push_back({base + ".text", "must be non-empty"});
    if (need.priority < 0) out.push_back({base + ".priority", "must be >= 0"});
    if (!need.id.value.empty() && !need_ids.insert(need.id.value).second) {
      out.push_back({base + ".id", "duplicate id " + need.id.value});
    }
  }

  const bool fixture_source = config.context_source == ContextSource::fixture_file;
  if (fixture_source && !config.fixture_path) {
    out.push_back({"fixture_path", "required when context_source is fixture_file"});
  }
  if (!fixture_source && config.fixture_path) {
    out.push_back({"fixture_path", "only allowed when context_source is fixture_file"});
  }
  if (!fixture_source && !config.perception_image) {
    out.push_back({"perception_image", "required when context_source is perception_backend"});
  }

  if (config.max_cycles < 0 || config.max_cycles > kMaxCycles) {
    out.push_back({"max_cycles", "must be within [0, " + std::to_string(kMaxCycles) + "]"});
  }
  if (config.image_size.height < kMinImageSide) out.push_back({"image_size.height", "must be >= 8"});
  if (config.image_size.width < kMinImageSide) out.push_back({"image_size.width", "must be >= 8"});
  if (!(config.sigma > 0.0) || !std::isfinite(config.sigma)) out.push_back({"sigma", "must be finite and > 0"});

  for (std::size_t i = 0; i < config.whatif_injections.size(); ++i) {
    if (auto problem = stimulus_problem(config.whatif_injections[i].stimulus); !problem.empty()) {
      out.push_back({indexed("whatif_injections", i) + ".stimulus", problem});
    }
  }

  check_backend(config.backend, out);

  if (config.generation.max_length < 1) out.push_back({"generation.max_length", "must be >= 1"});
  if (!(config.generation.temperature >= 0.0)) out.push_back({"generation.temperature", "must be >= 0"});
  if (config.generation.delimiter.empty()) out.push_back({"generation.delimiter", "must be non-empty"});
  if (!(config.min_confidence >= 0.0 && config.min_confidence <= 1.0)) {
    out.push_back({"min_confidence", "must be within [0, 1]"});
  }
  if (config.capacity < 1) out.push_back({"capacity", "must be >= 1"});

  for (std::size_t i = 0; i < config.rules.size(); ++i) {
    const auto& rule = config.rules[i];
    if (rule.triggers.empty()) out.push_back({indexed("rules", i) + ".triggers", "must be non-empty"});
    if (rule.completion.empty()) out.push_back({indexed("rules", i) + ".completion", "must be non-empty"});
  }
  for (std::size_t i = 0; i < config.custom_queries.size(); ++i) {
    if (trim(config.custom_queries[i]).empty()) out.push_back({indexed("custom_queries", i), "must be non-empty"});
  }
  return out;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();

  ScenarioConfig config;
  try {
    config = json::parse(buffer.str()).get<ScenarioConfig>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }

  const auto base = path.parent_path();
  auto resolve = [&base](std::optional<std::string>& p) {
    if (p && !p->empty() && std::filesystem::path(*p).is_relative()) p = (base / *p).lexically_normal().string();
  };
  resolve(config.fixture_path);
  resolve(config.perception_image);
  resolve(config.backend.fixture_bundle);
  return config;
}

void apply_backend_env(BackendConfig& config) {
  if (const char* mode = std::getenv("COGITO_BACKEND_MODE"); mode && *mode) {
    if (auto parsed = parse_backend_mode(mode)) config.mode = *parsed;
  }
  const char* url = std::getenv("COGITO_BACKEND_URL");
  if (config.mode == BackendMode::remote && url && *url) {
    config.base_url = std::string(url);
  }
  if (const char* timeout = std::getenv("COGITO_TIMEOUT_MS"); timeout && *timeout) {
    char* end = nullptr;
    const long long value = std::strtoll(timeout, &end, 10);
    if (end && *end == '\0') config.timeout_ms = value;
  }
}

}  // namespace cogito
