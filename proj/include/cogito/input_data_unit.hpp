#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "cogito/model.hpp"

namespace cogito {

inline constexpr double kDefaultMinConfidence = 0.8;
inline constexpr std::size_t kDefaultCapacity = 64;

struct Detection {
  std::string caption;
  double confidence = 0.0;
  BoundingBox bbox;
};

// What a caption backend returns for one image.
struct PerceptionResponse {
  std::string response_id;
  std::vector<Detection> detections;
};

// Bounded, arrival-ordered view of what the agent currently perceives.
struct ContextSnapshot {
  std::vector<ContextObservation> observations;  // oldest first
  std::uint64_t cycle = 0;
  std::size_t capacity = kDefaultCapacity;
  std::set<std::string> seen_responses;

  std::vector<Sentence> sentences() const;
};

// Appends every detection at or above min_confidence, evicting the oldest
// observations past capacity. A response id that was already ingested is a
// no-op. Throws MalformedResponse for a detection without caption, and
// PreconditionViolation when min_confidence is outside [0,1].
ContextSnapshot ingest_observations(ContextSnapshot snapshot, const PerceptionResponse& raw,
                                    double min_confidence, IdGenerator& ids);

// Appends observations directly (fixture contexts), with the same eviction.
ContextSnapshot append_observations(ContextSnapshot snapshot, std::vector<ContextObservation> items);

// One caption per line; empty file -> empty list; a blank line is a
// ParseError naming its 1-based line number. Missing file -> FileNotFound.
std::vector<ContextObservation> load_fixture(const std::filesystem::path& path, IdGenerator& ids,
                                             std::uint64_t timestamp = 0);

}  // namespace cogito
