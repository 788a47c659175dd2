#include "cogito/backend.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"

#include "cogito/error.hpp"
#include "cogito/image_io.hpp"

namespace cogito {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Offline

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = kFnvOffset;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= kFnvPrime;
  }
  return h;
}

EmbeddingVector hash_embed(std::string_view text, std::int64_t dim) {
  if (dim < 2) throw Error(ErrorCode::PreconditionViolation, "embedding dim must be >= 2");
  if (text.empty()) throw Error(ErrorCode::EmptyText, "cannot embed empty text");

  Lcg64 rng(fnv1a64(text));
  std::vector<double> values(static_cast<std::size_t>(dim));
  double norm2 = 0.0;
  for (auto& v : values) {
    v = rng.next_unit();
    norm2 += v * v;
  }
  if (!(norm2 > 0.0)) throw Error(ErrorCode::ZeroNorm, "hash embedding collapsed to zero");
  const double norm = std::sqrt(norm2);
  for (auto& v : values) v /= norm;
  return EmbeddingVector(std::move(values));
}

std::string template_generate(std::string_view prompt, std::span<const TemplateRule> rules) {
  if (rules.empty()) throw Error(ErrorCode::PreconditionViolation, "rule table is empty");
  for (const auto& rule : rules) {
    const bool all = std::all_of(rule.triggers.begin(), rule.triggers.end(),
                                 [&](const std::string& t) { return prompt.find(t) != std::string_view::npos; });
    if (all) return rule.completion;
  }
  return std::string(kFallbackCompletion);
}

std::vector<TemplateRule> default_rules() {
  // Ordered most specific first: the follow-up rule must win over the
  // hypothesis rule, and both over the plain need rules.
  return {
      {{"Plan:\n1. the person is nervous", "Hypothesis:"},
       "the person breaks down the door - the person call the firefighters for they open the door"},
      {{"Hypothesis: What if the key doesn't open the door?"}, "the person is nervous"},
      {{"Need: need the keys", "bunch of keys"},
       "Pick up the keys and open the door - Take the keys and unlock the door - "
       "Use the keys to open the door and go out"},
      {{"drink water"}, "Take a sip of water from the bottle on the table"},
  };
}

namespace {

double lattice_value(std::uint64_t base, int octave, int channel, std::int64_t ix, std::int64_t iy) {
  const std::uint64_t key = base ^ (static_cast<std::uint64_t>(ix) * kFnvPrime) ^
                            (static_cast<std::uint64_t>(iy) * kLcgMultiplier) ^
                            (static_cast<std::uint64_t>(channel * 4 + octave + 1) * kLcgIncrement);
  Lcg64 rng(key);
  rng.next();
  return rng.next_unit();
}

}  // namespace

RgbImage procedural_image(std::string_view prompt, int height, int width, std::uint64_t seed) {
  if (height < 8 || width < 8) throw Error(ErrorCode::PreconditionViolation, "procedural image must be at least 8x8");

  constexpr int kOctaves = 3;
  const std::uint64_t base = fnv1a64(prompt) ^ seed;
  const double coarse_cell = std::max(height, width) / 2.0;

  RgbImage image(height, width);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      for (int ch = 0; ch < 3; ++ch) {
        double value = 0.0, amplitude = 1.0, total = 0.0, cell = coarse_cell;
        for (int o = 0; o < kOctaves; ++o) {
          const double fx = c / cell, fy = r / cell;
          const auto ix = static_cast<std::int64_t>(std::floor(fx));
          const auto iy = static_cast<std::int64_t>(std::floor(fy));
          const double tx = fx - static_cast<double>(ix), ty = fy - static_cast<double>(iy);
          const double v00 = lattice_value(base, o, ch, ix, iy);
          const double v10 = lattice_value(base, o, ch, ix + 1, iy);
          const double v01 = lattice_value(base, o, ch, ix, iy + 1);
          const double v11 = lattice_value(base, o, ch, ix + 1, iy + 1);
          const double top = v00 + (v10 - v00) * tx;
          const double bottom = v01 + (v11 - v01) * tx;
          value += amplitude * (top + (bottom - top) * ty);
          total += amplitude;
          amplitude *= 0.5;
          cell /= 2.0;
        }
        const double unit = value / total;  // [-1, 1]
        image.at(r, c, ch) = static_cast<std::uint8_t>(std::clamp(std::floor((unit + 1.0) * 127.5 + 0.5), 0.0, 255.0));
      }
    }
  }
  return image;
}

std::vector<EmbeddingVector> HashEmbedder::embed(std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(hash_embed(t, dim_));
  return out;
}

TemplateGenerator::TemplateGenerator(std::vector<TemplateRule> rules)
    : rules_(rules.empty() ? default_rules() : std::move(rules)) {}

std::string TemplateGenerator::generate(const std::string& prompt, std::int64_t, double) {
  return template_generate(prompt, rules_);
}

RgbImage ProceduralImageGenerator::generate(const std::string& prompt, int height, int width, std::uint64_t seed) {
  return procedural_image(prompt, height, width, seed);
}

// ---------------------------------------------------------------------------
// Remote

void InFlightLimiter::acquire() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return in_flight_ < limit_; });
  ++in_flight_;
}

void InFlightLimiter::release() {
  {
    std::lock_guard lock(mu_);
    --in_flight_;
  }
  cv_.notify_one();
}

namespace {

struct SplitUrl {
  std::string host;    // scheme://host:port
  std::string prefix;  // path prefix without trailing slash
};

SplitUrl split_url(const std::string& url) {
  const auto scheme = url.find("://");
  const auto path_start = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (path_start == std::string::npos) return {url, ""};
  std::string prefix = url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, path_start), prefix};
}

std::string excerpt(const std::string& body) {
  constexpr std::size_t kMax = 200;
  return body.size() <= kMax ? body : body.substr(0, kMax) + "...";
}

class LimiterGuard {
 public:
  explicit LimiterGuard(InFlightLimiter& limiter) : limiter_(limiter) { limiter_.acquire(); }
  ~LimiterGuard() { limiter_.release(); }
  LimiterGuard(const LimiterGuard&) = delete;
  LimiterGuard& operator=(const LimiterGuard&) = delete;

 private:
  InFlightLimiter& limiter_;
};

}  // namespace

RemoteClient::RemoteClient(BackendConfig config) : config_(std::move(config)), limiter_(config_.max_in_flight) {
  if (config_.mode != BackendMode::remote || !config_.base_url || config_.base_url->empty()) {
    throw Error(ErrorCode::PreconditionViolation, "remote client requires mode=remote and a base_url");
  }
}

json RemoteClient::call(std::string_view endpoint, const json& request) {
  const auto url = split_url(*config_.base_url);
  const std::string path = url.prefix + std::string(endpoint);
  const std::string body = request.dump();
  const auto timeout = std::chrono::milliseconds(std::max<std::int64_t>(1, config_.timeout_ms));

  last_attempts_ = 0;
  for (std::int64_t attempt = 0;; ++attempt) {
    httplib::Client client(url.host);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    httplib::Result result;
    {
      LimiterGuard guard(limiter_);
      ++last_attempts_;
      result = client.Post(path, body, "application/json");
    }

    if (!result) {
      const auto err = result.error();
      const std::string what = httplib::to_string(err);
      if (err == httplib::Error::Read || err == httplib::Error::Write) {
        if (attempt < config_.retries) {
          std::this_thread::sleep_for(std::chrono::milliseconds(kBackoffBaseMs << attempt));
          continue;
        }
        throw BackendFailure(ErrorCode::Timeout, std::string(endpoint) + " timed out after " +
                                                     std::to_string(last_attempts_.load()) + " attempt(s)");
      }
      if (err == httplib::Error::Connection) {
        throw BackendFailure(ErrorCode::BackendUnavailable, *config_.base_url + ": " + what);
      }
      throw BackendFailure(ErrorCode::BackendError, std::string(endpoint) + ": " + what);
    }

    if (result->status < 200 || result->status >= 300) {
      throw BackendFailure(ErrorCode::BackendError,
                           std::string(endpoint) + " returned " + std::to_string(result->status) + ": " +
                               excerpt(result->body),
                           result->status);
    }
    try {
      return json::parse(result->body);
    } catch (const json::exception&) {
      throw BackendFailure(ErrorCode::MalformedResponse, std::string(endpoint) + ": body is not JSON: " +
                                                             excerpt(result->body),
                           result->status);
    }
  }
}

PerceptionResponse parse_perception_response(const json& body) {
  try {
    PerceptionResponse out;
    out.response_id = body.value("response_id", std::string{});
    for (const auto& d : body.at("detections")) {
      Detection det;
      if (!d.contains("caption") || !d.at("caption").is_string()) {
        throw Error(ErrorCode::MalformedResponse, "detection lacks a caption");
      }
      det.caption = d.at("caption").get<std::string>();
      det.confidence = d.at("confidence").get<double>();
      if (d.contains("bbox") && !d.at("bbox").is_null()) {
        const auto& b = d.at("bbox");
        if (b.is_array() && b.size() == 4) {
          det.bbox = {b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
        } else if (b.is_object()) {
          det.bbox = {b.at("x").get<double>(), b.at("y").get<double>(), b.at("w").get<double>(), b.at("h").get<double>()};
        } else {
          throw Error(ErrorCode::MalformedResponse, "bbox must be [x, y, w, h]");
        }
      }
      out.detections.push_back(std::move(det));
    }
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedResponse, std::string("perception response: ") + e.what());
  }
}

json to_wire(const PerceptionResponse& response) {
  json detections = json::array();
  for (const auto& d : response.detections) {
    detections.push_back(
        {{"caption", d.caption}, {"confidence", d.confidence}, {"bbox", {d.bbox.x, d.bbox.y, d.bbox.w, d.bbox.h}}});
  }
  return {{"response_id", response.response_id}, {"detections", detections}};
}

std::vector<EmbeddingVector> parse_embed_response(const json& body, std::size_t expected) {
  try {
    std::vector<EmbeddingVector> out;
    for (const auto& row : body.at("vectors")) {
      auto values = row.get<std::vector<double>>();
      for (double v : values) {
        if (!std::isfinite(v)) throw Error(ErrorCode::MalformedResponse, "embedding contains a non-finite value");
      }
      out.emplace_back(std::move(values));
    }
    if (out.size() != expected) {
      throw Error(ErrorCode::MalformedResponse,
                  "expected " + std::to_string(expected) + " vectors, got " + std::to_string(out.size()));
    }
    const std::size_t dim = body.contains("dim") ? body.at("dim").get<std::size_t>() : (out.empty() ? 0 : out[0].dim());
    for (const auto& v : out) {
      if (v.dim() != dim) throw Error(ErrorCode::MalformedResponse, "embedding dims disagree");
    }
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedResponse, std::string("embed response: ") + e.what());
  }
}

std::string parse_generate_response(const json& body) {
  if (!body.is_object() || !body.contains("text") || !body.at("text").is_string()) {
    throw Error(ErrorCode::MalformedResponse, "generate response lacks a text field");
  }
  return body.at("text").get<std::string>();
}

json generate_request(const std::string& prompt, std::int64_t max_length, double temperature) {
  return {{"prompt", prompt}, {"max_length", max_length}, {"temperature", temperature}};
}

json image_request(const std::string& prompt, int height, int width, std::uint64_t seed) {
  return {{"prompt", prompt}, {"height", height}, {"width", width}, {"seed", seed}};
}

json caption_request(std::span<const std::uint8_t> image_bytes, double min_confidence) {
  return {{"image_b64", base64_encode(image_bytes)}, {"min_confidence", min_confidence}};
}

std::vector<EmbeddingVector> RemoteEmbedder::embed(std::span<const std::string> texts) {
  json request = {{"texts", std::vector<std::string>(texts.begin(), texts.end())}};
  return parse_embed_response(client_->call("/v1/embed", request), texts.size());
}

std::string RemoteGenerator::generate(const std::string& prompt, std::int64_t max_length, double temperature) {
  return parse_generate_response(client_->call("/v1/generate", generate_request(prompt, max_length, temperature)));
}

RgbImage RemoteImageGenerator::generate(const std::string& prompt, int height, int width, std::uint64_t seed) {
  const json body = client_->call("/v1/image", image_request(prompt, height, width, seed));
  if (!body.is_object() || !body.contains("png_b64") || !body.at("png_b64").is_string()) {
    throw Error(ErrorCode::MalformedResponse, "image response lacks png_b64");
  }
  return decode_png(base64_decode(body.at("png_b64").get<std::string>()));
}

PerceptionResponse RemoteCaptioner::caption(std::span<const std::uint8_t> image_bytes, double min_confidence) {
  return parse_perception_response(client_->call("/v1/caption", caption_request(image_bytes, min_confidence)));
}

// ---------------------------------------------------------------------------
// Fixture

std::string request_digest(std::string_view endpoint, const json& request) {
  const std::string canonical = std::string(endpoint) + "\n" + request.dump();
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical)));
  return buf;
}

std::shared_ptr<FixtureBundle> FixtureBundle::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();

  auto bundle = std::make_shared<FixtureBundle>();
  bundle->base_dir_ = path.parent_path();
  try {
    const json doc = json::parse(buffer.str());
    bundle->metadata_ = doc.value("metadata", json::object());
    bundle->offline_fallback_ = doc.value("fallback", std::string("none")) == "offline";
    if (doc.contains("embeddings")) {
      for (const auto& [text, vec] : doc.at("embeddings").items()) {
        bundle->embeddings_.emplace(text, EmbeddingVector(vec.get<std::vector<double>>()));
      }
    }
    if (doc.contains("completions")) {
      for (const auto& [digest, text] : doc.at("completions").items()) bundle->completions_.emplace(digest, text);
    }
    if (doc.contains("images")) {
      for (const auto& [digest, file] : doc.at("images").items()) bundle->images_.emplace(digest, file);
    }
    if (doc.contains("captions")) {
      for (const auto& [digest, resp] : doc.at("captions").items()) {
        bundle->captions_.emplace(digest, parse_perception_response(resp));
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return bundle;
}

const EmbeddingVector* FixtureBundle::embedding(const std::string& text) const {
  auto it = embeddings_.find(text);
  return it == embeddings_.end() ? nullptr : &it->second;
}

const std::string* FixtureBundle::completion(const std::string& digest) const {
  auto it = completions_.find(digest);
  return it == completions_.end() ? nullptr : &it->second;
}

std::optional<RgbImage> FixtureBundle::image(const std::string& digest) const {
  auto it = images_.find(digest);
  if (it == images_.end()) return std::nullopt;
  return read_ppm(base_dir_ / it->second);
}

const PerceptionResponse* FixtureBundle::caption(const std::string& digest) const {
  auto it = captions_.find(digest);
  return it == captions_.end() ? nullptr : &it->second;
}

std::vector<EmbeddingVector> FixtureEmbedder::embed(std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    const auto* v = bundle_->embedding(text);
    if (!v) throw BackendFailure(ErrorCode::FixtureMiss, "no recorded embedding for \"" + text + "\"");
    out.push_back(*v);
  }
  return out;
}

std::string FixtureGenerator::generate(const std::string& prompt, std::int64_t max_length, double temperature) {
  const auto digest = request_digest("/v1/generate", generate_request(prompt, max_length, temperature));
  if (const auto* text = bundle_->completion(digest)) return *text;
  if (bundle_->offline_fallback()) return offline_.generate(prompt, max_length, temperature);
  throw BackendFailure(ErrorCode::FixtureMiss, "no recorded completion for digest " + digest);
}

RgbImage FixtureImageGenerator::generate(const std::string& prompt, int height, int width, std::uint64_t seed) {
  const auto digest = request_digest("/v1/image", image_request(prompt, height, width, seed));
  if (auto image = bundle_->image(digest)) return *image;
  if (bundle_->offline_fallback()) return procedural_image(prompt, height, width, seed);
  throw BackendFailure(ErrorCode::FixtureMiss, "no recorded image for digest " + digest);
}

PerceptionResponse FixtureCaptioner::caption(std::span<const std::uint8_t> image_bytes, double min_confidence) {
  const auto digest = request_digest("/v1/caption", caption_request(image_bytes, min_confidence));
  if (const auto* response = bundle_->caption(digest)) return *response;
  throw BackendFailure(ErrorCode::FixtureMiss, "no recorded caption response for digest " + digest);
}

Backends make_backends(const BackendConfig& config, std::vector<TemplateRule> rules) {
  if (rules.empty()) rules = default_rules();
  Backends b;
  b.mode = config.mode;
  switch (config.mode) {
    case BackendMode::offline:
      b.embedder = std::make_shared<HashEmbedder>(config.embed_dim);
      b.generator = std::make_shared<TemplateGenerator>(std::move(rules));
      b.images = std::make_shared<ProceduralImageGenerator>();
      break;
    case BackendMode::remote: {
      auto client = std::make_shared<RemoteClient>(config);
      b.embedder = std::make_shared<RemoteEmbedder>(client);
      b.generator = std::make_shared<RemoteGenerator>(client);
      b.images = std::make_shared<RemoteImageGenerator>(client);
      b.captioner = std::make_shared<RemoteCaptioner>(client);
      break;
    }
    case BackendMode::fixture: {
      if (!config.fixture_bundle) throw Error(ErrorCode::PreconditionViolation, "fixture mode requires fixture_bundle");
      std::shared_ptr<const FixtureBundle> bundle = FixtureBundle::load(*config.fixture_bundle);
      b.embedder = std::make_shared<FixtureEmbedder>(bundle);
      b.generator = std::make_shared<FixtureGenerator>(bundle, std::move(rules));
      b.images = std::make_shared<FixtureImageGenerator>(bundle);
      b.captioner = std::make_shared<FixtureCaptioner>(bundle);
      break;
    }
  }
  return b;
}

}  // namespace cogito
