#include "cogito/input_data_unit.hpp"

#include <fstream>
#include <sstream>

#include "cogito/error.hpp"

namespace cogito {
namespace {

void evict(ContextSnapshot& snapshot) {
  if (snapshot.capacity == 0) snapshot.capacity = 1;
  if (snapshot.observations.size() > snapshot.capacity) {
    const auto excess = snapshot.observations.size() - snapshot.capacity;
    snapshot.observations.erase(snapshot.observations.begin(),
                                snapshot.observations.begin() + static_cast<std::ptrdiff_t>(excess));
  }
}

}  // namespace

std::vector<Sentence> ContextSnapshot::sentences() const {
  std::vector<Sentence> out;
  out.reserve(observations.size());
  for (const auto& obs : observations) out.push_back(obs.sentence);
  return out;
}

ContextSnapshot ingest_observations(ContextSnapshot snapshot, const PerceptionResponse& raw, double min_confidence,
                                    IdGenerator& ids) {
  if (!(min_confidence >= 0.0 && min_confidence <= 1.0)) {
    throw Error(ErrorCode::PreconditionViolation, "min_confidence must be within [0, 1]");
  }
  if (!raw.response_id.empty() && snapshot.seen_responses.contains(raw.response_id)) return snapshot;

  // validate the whole response before touching the snapshot
  for (std::size_t i = 0; i < raw.detections.size(); ++i) {
    const auto& d = raw.detections[i];
    if (trim(d.caption).empty()) {
      throw Error(ErrorCode::MalformedResponse, "detection " + std::to_string(i) + " has no caption");
    }
    if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
      throw Error(ErrorCode::MalformedResponse, "detection " + std::to_string(i) + " confidence outside [0, 1]");
    }
  }

  for (const auto& d : raw.detections) {
    if (d.confidence < min_confidence) continue;
    ContextObservation obs;
    obs.sentence = Sentence{ids.next<SentenceId>(), trim(d.caption), SentenceSource::perception, snapshot.cycle};
    obs.confidence = d.confidence;
    if (d.bbox.w > 0 && d.bbox.h > 0) obs.bbox = d.bbox;
    snapshot.observations.push_back(std::move(obs));
  }
  if (!raw.response_id.empty()) snapshot.seen_responses.insert(raw.response_id);
  evict(snapshot);
  return snapshot;
}

ContextSnapshot append_observations(ContextSnapshot snapshot, std::vector<ContextObservation> items) {
  for (auto& item : items) snapshot.observations.push_back(std::move(item));
  evict(snapshot);
  return snapshot;
}

std::vector<ContextObservation> load_fixture(const std::filesystem::path& path, IdGenerator& ids,
                                             std::uint64_t timestamp) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();

  std::vector<ContextObservation> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    auto end = content.find('\n', pos);
    if (end == std::string::npos) end = content.size();
    ++line_no;
    std::string text = trim(std::string_view(content).substr(pos, end - pos));
    if (text.empty()) {
      throw Error(ErrorCode::ParseError, path.string() + ": line " + std::to_string(line_no) + " is blank");
    }
    out.push_back(ContextObservation{Sentence{ids.next<SentenceId>(), std::move(text), SentenceSource::fixture, timestamp},
                                     1.0, std::nullopt});
    pos = end + 1;
  }
  return out;
}

}  // namespace cogito
