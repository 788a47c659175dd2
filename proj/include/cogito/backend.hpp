#pragma once
// Model capabilities behind one interface each: caption, embed, generate,
// image. Three families implement them:
//   - offline: pure deterministic stand-ins (hash embedder, rule-table text
//     generator, value-noise images),
//   - remote:  JSON over HTTP against the /v1 wire protocol,
//   - fixture: recorded responses keyed by request digest.

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "cogito/input_data_unit.hpp"
#include "cogito/model.hpp"
#include "cogito/scenario.hpp"
#include "cogito/semantic_matcher.hpp"

namespace cogito {

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::vector<EmbeddingVector> embed(std::span<const std::string> texts) = 0;
};

class TextGenerator {
 public:
  virtual ~TextGenerator() = default;
  virtual std::string generate(const std::string& prompt, std::int64_t max_length, double temperature) = 0;
};

class ImageGenerator {
 public:
  virtual ~ImageGenerator() = default;
  virtual RgbImage generate(const std::string& prompt, int height, int width, std::uint64_t seed) = 0;
};

class Captioner {
 public:
  virtual ~Captioner() = default;
  virtual PerceptionResponse caption(std::span<const std::uint8_t> image_bytes, double min_confidence) = 0;
};

struct Backends {
  BackendMode mode = BackendMode::offline;
  std::shared_ptr<Embedder> embedder;
  std::shared_ptr<TextGenerator> generator;
  std::shared_ptr<ImageGenerator> images;
  std::shared_ptr<Captioner> captioner;  // null when the mode has none
};

// ---------------------------------------------------------------------------
// Offline

inline constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ULL;
inline constexpr std::uint64_t kLcgMultiplier = 6364136223846793005ULL;
inline constexpr std::uint64_t kLcgIncrement = 1442695040888963407ULL;

inline constexpr std::string_view kFallbackCompletion = "observe the environment";

std::uint64_t fnv1a64(std::string_view bytes);

// 64-bit LCG; next_unit() maps the top 53 bits of the new state to [-1, 1).
class Lcg64 {
 public:
  explicit Lcg64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    state_ = state_ * kLcgMultiplier + kLcgIncrement;
    return state_;
  }
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-52 - 1.0; }

 private:
  std::uint64_t state_;
};

// Unit-norm vector seeded by FNV-1a of the UTF-8 bytes.
// Throws EmptyText for empty text, PreconditionViolation for dim < 2.
EmbeddingVector hash_embed(std::string_view text, std::int64_t dim);

// First rule whose triggers all occur in the prompt wins; no match returns
// kFallbackCompletion. Throws PreconditionViolation for an empty table.
std::string template_generate(std::string_view prompt, std::span<const TemplateRule> rules);

// Canned rules reproducing the published generator outputs.
std::vector<TemplateRule> default_rules();

// Smooth value noise, a pure function of (prompt, size, seed).
// Throws PreconditionViolation when height or width is below 8.
RgbImage procedural_image(std::string_view prompt, int height, int width, std::uint64_t seed);

class HashEmbedder final : public Embedder {
 public:
  explicit HashEmbedder(std::int64_t dim) : dim_(dim) {}
  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override;

 private:
  std::int64_t dim_;
};

class TemplateGenerator final : public TextGenerator {
 public:
  explicit TemplateGenerator(std::vector<TemplateRule> rules = default_rules());
  std::string generate(const std::string& prompt, std::int64_t max_length, double temperature) override;

 private:
  std::vector<TemplateRule> rules_;
};

class ProceduralImageGenerator final : public ImageGenerator {
 public:
  RgbImage generate(const std::string& prompt, int height, int width, std::uint64_t seed) override;
};

// ---------------------------------------------------------------------------
// Remote

// Caps the number of concurrent requests.
class InFlightLimiter {
 public:
  explicit InFlightLimiter(std::int64_t limit) : limit_(limit < 1 ? 1 : limit) {}
  void acquire();
  void release();

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::int64_t limit_;
  std::int64_t in_flight_ = 0;
};

class RemoteClient {
 public:
  // Throws PreconditionViolation unless mode == remote with a base_url.
  explicit RemoteClient(BackendConfig config);

  // POSTs the request to base_url + endpoint. Timeouts are retried up to
  // `retries` times, sleeping 100 ms * 2^k before retry k. Connection
  // failures raise BackendUnavailable; non-2xx raises BackendError carrying
  // the status; an unparsable body raises MalformedResponse.
  nlohmann::json call(std::string_view endpoint, const nlohmann::json& request);

  const BackendConfig& config() const { return config_; }
  int attempts_made() const { return last_attempts_.load(); }

 private:
  BackendConfig config_;
  InFlightLimiter limiter_;
  std::atomic<int> last_attempts_{0};
};

inline constexpr std::int64_t kBackoffBaseMs = 100;

// Parsers for the wire responses. Throw MalformedResponse.
PerceptionResponse parse_perception_response(const nlohmann::json& body);
std::vector<EmbeddingVector> parse_embed_response(const nlohmann::json& body, std::size_t expected);
std::string parse_generate_response(const nlohmann::json& body);

nlohmann::json to_wire(const PerceptionResponse& response);

class RemoteEmbedder final : public Embedder {
 public:
  explicit RemoteEmbedder(std::shared_ptr<RemoteClient> client) : client_(std::move(client)) {}
  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override;

 private:
  std::shared_ptr<RemoteClient> client_;
};

class RemoteGenerator final : public TextGenerator {
 public:
  explicit RemoteGenerator(std::shared_ptr<RemoteClient> client) : client_(std::move(client)) {}
  std::string generate(const std::string& prompt, std::int64_t max_length, double temperature) override;

 private:
  std::shared_ptr<RemoteClient> client_;
};

class RemoteImageGenerator final : public ImageGenerator {
 public:
  explicit RemoteImageGenerator(std::shared_ptr<RemoteClient> client) : client_(std::move(client)) {}
  RgbImage generate(const std::string& prompt, int height, int width, std::uint64_t seed) override;

 private:
  std::shared_ptr<RemoteClient> client_;
};

class RemoteCaptioner final : public Captioner {
 public:
  explicit RemoteCaptioner(std::shared_ptr<RemoteClient> client) : client_(std::move(client)) {}
  PerceptionResponse caption(std::span<const std::uint8_t> image_bytes, double min_confidence) override;

 private:
  std::shared_ptr<RemoteClient> client_;
};

// ---------------------------------------------------------------------------
// Fixture

// Hex digest of endpoint + "\n" + canonical request JSON.
std::string request_digest(std::string_view endpoint, const nlohmann::json& request);

// Request bodies exactly as sent over the wire; also used for digests.
nlohmann::json generate_request(const std::string& prompt, std::int64_t max_length, double temperature);
nlohmann::json image_request(const std::string& prompt, int height, int width, std::uint64_t seed);
nlohmann::json caption_request(std::span<const std::uint8_t> image_bytes, double min_confidence);

// Recorded responses:
//   { "metadata": {...},
//     "fallback": "offline" | "none",
//     "embeddings":  { "<text>": [..] },
//     "completions": { "<digest>": "<text>" },
//     "images":      { "<digest>": "<relative .ppm path>" },
//     "captions":    { "<digest>": <PerceptionResponse> } }
class FixtureBundle {
 public:
  static std::shared_ptr<FixtureBundle> load(const std::filesystem::path& path);

  bool offline_fallback() const { return offline_fallback_; }
  const nlohmann::json& metadata() const { return metadata_; }

  const EmbeddingVector* embedding(const std::string& text) const;
  const std::string* completion(const std::string& digest) const;
  std::optional<RgbImage> image(const std::string& digest) const;
  const PerceptionResponse* caption(const std::string& digest) const;

 private:
  std::filesystem::path base_dir_;
  nlohmann::json metadata_;
  bool offline_fallback_ = false;
  std::map<std::string, EmbeddingVector> embeddings_;
  std::map<std::string, std::string> completions_;
  std::map<std::string, std::string> images_;
  std::map<std::string, PerceptionResponse> captions_;
};

class FixtureEmbedder final : public Embedder {
 public:
  explicit FixtureEmbedder(std::shared_ptr<const FixtureBundle> bundle) : bundle_(std::move(bundle)) {}
  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override;

 private:
  std::shared_ptr<const FixtureBundle> bundle_;
};

class FixtureGenerator final : public TextGenerator {
 public:
  FixtureGenerator(std::shared_ptr<const FixtureBundle> bundle, std::vector<TemplateRule> rules)
      : bundle_(std::move(bundle)), offline_(std::move(rules)) {}
  std::string generate(const std::string& prompt, std::int64_t max_length, double temperature) override;

 private:
  std::shared_ptr<const FixtureBundle> bundle_;
  TemplateGenerator offline_;
};

class FixtureImageGenerator final : public ImageGenerator {
 public:
  explicit FixtureImageGenerator(std::shared_ptr<const FixtureBundle> bundle) : bundle_(std::move(bundle)) {}
  RgbImage generate(const std::string& prompt, int height, int width, std::uint64_t seed) override;

 private:
  std::shared_ptr<const FixtureBundle> bundle_;
};

class FixtureCaptioner final : public Captioner {
 public:
  explicit FixtureCaptioner(std::shared_ptr<const FixtureBundle> bundle) : bundle_(std::move(bundle)) {}
  PerceptionResponse caption(std::span<const std::uint8_t> image_bytes, double min_confidence) override;

 private:
  std::shared_ptr<const FixtureBundle> bundle_;
};

// Builds the backend set for a mode. `rules` feeds the offline generator
// (and the fixture fallback); empty means default_rules().
Backends make_backends(const BackendConfig& config, std::vector<TemplateRule> rules = {});

}  // namespace cogito
