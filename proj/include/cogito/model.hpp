#pragma once
// Domain types shared by every unit of the thinking engine.
//
// All types are plain values: copy them freely between threads. Identifiers
// are run-scoped decimal strings drawn from a single IdGenerator so that a
// replayed run reproduces every id.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cogito {

template <class Tag>
struct Id {
  std::string value;

  friend auto operator<=>(const Id&, const Id&) = default;
  friend bool operator==(const Id&, const Id&) = default;
};

using SentenceId = Id<struct SentenceTag>;
using NeedId = Id<struct NeedTag>;
using ActionId = Id<struct ActionTag>;
using ImageId = Id<struct ImageTag>;

class IdGenerator {
 public:
  explicit IdGenerator(std::uint64_t start = 0) : next_(start) {}

  template <class IdT>
  IdT next() {
    return IdT{std::to_string(next_++)};
  }

  std::uint64_t peek() const { return next_; }

 private:
  std::uint64_t next_;
};

// Whitespace trim (ASCII space, tab, CR, LF, VT, FF).
std::string trim(std::string_view text);

enum class SentenceSource { perception, audio, tactile, fixture, generated };

struct Sentence {
  SentenceId id;
  std::string text;
  SentenceSource source = SentenceSource::generated;
  std::uint64_t timestamp = 0;  // cycle counter, not wall clock

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct BoundingBox {
  double x = 0, y = 0, w = 0, h = 0;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct ContextObservation {
  Sentence sentence;
  double confidence = 1.0;
  std::optional<BoundingBox> bbox;

  friend bool operator==(const ContextObservation&, const ContextObservation&) = default;
};

enum class NeedStatus { pending, active, satisfied };

struct Need {
  NeedId id;
  std::string text;
  std::int64_t priority = 0;  // 0 = highest
  NeedStatus status = NeedStatus::pending;

  friend bool operator==(const Need&, const Need&) = default;
};

enum class ActionStatus { planned, executed, abandoned };

struct ScheduledAction {
  ActionId id;
  std::string text;
  NeedId origin_need;
  std::int64_t sequence_index = 0;
  ActionStatus status = ActionStatus::planned;

  friend bool operator==(const ScheduledAction&, const ScheduledAction&) = default;
};

enum class StimulusKind { description, hypothetical, goal };

struct Stimulus {
  StimulusKind kind = StimulusKind::description;
  std::string text;
  std::uint64_t origin_cycle = 0;

  // Checked constructor: hypothetical stimuli must be phrased as a question.
  static Stimulus make(StimulusKind kind, std::string text, std::uint64_t origin_cycle);

  friend bool operator==(const Stimulus&, const Stimulus&) = default;
};

// Returns an empty string when the stimulus satisfies its invariants,
// otherwise a description of the first problem.
std::string stimulus_problem(const Stimulus& stimulus);

struct RgbImage {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> pixels;  // row-major, 3 bytes per pixel

  RgbImage() = default;
  RgbImage(int h, int w) : height(h), width(w), pixels(static_cast<std::size_t>(h) * w * 3, 0) {}

  std::uint8_t& at(int row, int col, int channel) {
    return pixels[(static_cast<std::size_t>(row) * width + col) * 3 + channel];
  }
  std::uint8_t at(int row, int col, int channel) const {
    return pixels[(static_cast<std::size_t>(row) * width + col) * 3 + channel];
  }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

struct GrayImage {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> pixels;  // row-major

  GrayImage() = default;
  GrayImage(int h, int w, std::uint8_t fill = 0)
      : height(h), width(w), pixels(static_cast<std::size_t>(h) * w, fill) {}

  std::uint8_t& at(int row, int col) { return pixels[static_cast<std::size_t>(row) * width + col]; }
  std::uint8_t at(int row, int col) const { return pixels[static_cast<std::size_t>(row) * width + col]; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

struct MentalImage {
  ImageId id;
  std::string prompt;
  RgbImage pixels;
  std::uint64_t seed = 0;
  Sentence descriptor;  // what the thinking unit perceives of this image

  friend bool operator==(const MentalImage&, const MentalImage&) = default;
};

struct SketchImage {
  ImageId source_id;
  GrayImage pixels;
  double sigma = 1.0;

  friend bool operator==(const SketchImage&, const SketchImage&) = default;
};

enum class QueryTemplateId { feasibility, preconditions, custom };

struct ReasoningQuery {
  QueryTemplateId template_id = QueryTemplateId::feasibility;
  std::string text;
  ImageId target_image;

  friend bool operator==(const ReasoningQuery&, const ReasoningQuery&) = default;
};

struct RankingEntry {
  SentenceId sentence_id;
  double score = 0.0;

  friend bool operator==(const RankingEntry&, const RankingEntry&) = default;
};

struct ThoughtCycle {
  std::uint64_t index = 0;
  NeedId need;
  std::vector<ContextObservation> context_snapshot;
  std::vector<RankingEntry> ranking;
  SentenceId chosen;
  std::string prompt;
  std::vector<ScheduledAction> actions;
  std::vector<Stimulus> stimuli;
  std::vector<ImageId> images;
  std::vector<ReasoningQuery> queries;
  std::vector<ScheduledAction> revisions;
  std::vector<std::string> revision_prompts;

  friend bool operator==(const ThoughtCycle&, const ThoughtCycle&) = default;
};

enum class BackendMode { offline, remote, fixture };

// Metadata for an image written next to the trace; pixels live in files.
struct ImageRecord {
  ImageId id;
  std::string prompt;
  std::uint64_t seed = 0;
  Sentence descriptor;
  int height = 0;
  int width = 0;
  double sigma = 1.0;
  std::string sketch_file;
  std::string color_file;  // empty unless colour images are saved

  friend bool operator==(const ImageRecord&, const ImageRecord&) = default;
};

struct TraceError {
  std::string code;
  std::string message;
  std::uint64_t cycle = 0;

  friend bool operator==(const TraceError&, const TraceError&) = default;
};

struct ThoughtTrace {
  std::uint64_t run_seed = 0;
  BackendMode backend_mode = BackendMode::offline;
  std::vector<ThoughtCycle> cycles;
  std::vector<Need> needs;
  std::vector<ImageRecord> images;
  std::optional<TraceError> error;

  friend bool operator==(const ThoughtTrace&, const ThoughtTrace&) = default;
};

std::string_view to_string(BackendMode mode);
std::optional<BackendMode> parse_backend_mode(std::string_view text);

}  // namespace cogito
