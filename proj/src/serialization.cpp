#include "cogito/serialization.hpp"

#include "cogito/error.hpp"

namespace cogito {
namespace {

template <class T>
void get_opt(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end() && !it->is_null()) it->get_to(out);
}

template <class T>
void get_opt(const json& j, const char* key, std::optional<T>& out) {
  if (auto it = j.find(key); it != j.end() && !it->is_null()) {
    out = it->get<T>();
  } else {
    out.reset();
  }
}

template <class T>
json opt_to_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

void to_json(json& j, const Sentence& v) {
  j = json{{"id", v.id}, {"text", v.text}, {"source", v.source}, {"timestamp", v.timestamp}};
}
void from_json(const json& j, Sentence& v) {
  j.at("id").get_to(v.id);
  j.at("text").get_to(v.text);
  get_opt(j, "source", v.source);
  get_opt(j, "timestamp", v.timestamp);
}

void to_json(json& j, const BoundingBox& v) { j = json{{"x", v.x}, {"y", v.y}, {"w", v.w}, {"h", v.h}}; }
void from_json(const json& j, BoundingBox& v) {
  // accepts {x,y,w,h} or [x,y,w,h]
  if (j.is_array()) {
    if (j.size() != 4) throw Error(ErrorCode::ParseError, "bbox array must have 4 entries");
    v = {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
    return;
  }
  j.at("x").get_to(v.x);
  j.at("y").get_to(v.y);
  j.at("w").get_to(v.w);
  j.at("h").get_to(v.h);
}

void to_json(json& j, const ContextObservation& v) {
  j = json{{"sentence", v.sentence}, {"confidence", v.confidence}, {"bbox", opt_to_json(v.bbox)}};
}
void from_json(const json& j, ContextObservation& v) {
  j.at("sentence").get_to(v.sentence);
  get_opt(j, "confidence", v.confidence);
  get_opt(j, "bbox", v.bbox);
}

void to_json(json& j, const Need& v) {
  j = json{{"id", v.id}, {"text", v.text}, {"priority", v.priority}, {"status", v.status}};
}
void from_json(const json& j, Need& v) {
  get_opt(j, "id", v.id);
  j.at("text").get_to(v.text);
  get_opt(j, "priority", v.priority);
  get_opt(j, "status", v.status);
}

void to_json(json& j, const ScheduledAction& v) {
  j = json{{"id", v.id},
           {"text", v.text},
           {"origin_need", v.origin_need},
           {"sequence_index", v.sequence_index},
           {"status", v.status}};
}
void from_json(const json& j, ScheduledAction& v) {
  j.at("id").get_to(v.id);
  j.at("text").get_to(v.text);
  j.at("origin_need").get_to(v.origin_need);
  j.at("sequence_index").get_to(v.sequence_index);
  get_opt(j, "status", v.status);
}

void to_json(json& j, const Stimulus& v) {
  j = json{{"kind", v.kind}, {"text", v.text}, {"origin_cycle", v.origin_cycle}};
}
void from_json(const json& j, Stimulus& v) {
  j.at("kind").get_to(v.kind);
  j.at("text").get_to(v.text);
  get_opt(j, "origin_cycle", v.origin_cycle);
}

void to_json(json& j, const ReasoningQuery& v) {
  j = json{{"template_id", v.template_id}, {"text", v.text}, {"target_image", v.target_image}};
}
void from_json(const json& j, ReasoningQuery& v) {
  j.at("template_id").get_to(v.template_id);
  j.at("text").get_to(v.text);
  j.at("target_image").get_to(v.target_image);
}

void to_json(json& j, const RankingEntry& v) { j = json{{"sentence_id", v.sentence_id}, {"score", v.score}}; }
void from_json(const json& j, RankingEntry& v) {
  j.at("sentence_id").get_to(v.sentence_id);
  j.at("score").get_to(v.score);
}

void to_json(json& j, const ThoughtCycle& v) {
  j = json{{"index", v.index},
           {"need", v.need},
           {"context_snapshot", v.context_snapshot},
           {"ranking", v.ranking},
           {"chosen", v.chosen},
           {"prompt", v.prompt},
           {"actions", v.actions},
           {"stimuli", v.stimuli},
           {"images", v.images},
           {"queries", v.queries},
           {"revisions", v.revisions},
           {"revision_prompts", v.revision_prompts}};
}
void from_json(const json& j, ThoughtCycle& v) {
  j.at("index").get_to(v.index);
  j.at("need").get_to(v.need);
  j.at("context_snapshot").get_to(v.context_snapshot);
  j.at("ranking").get_to(v.ranking);
  j.at("chosen").get_to(v.chosen);
  j.at("prompt").get_to(v.prompt);
  j.at("actions").get_to(v.actions);
  j.at("stimuli").get_to(v.stimuli);
  j.at("images").get_to(v.images);
  j.at("queries").get_to(v.queries);
  j.at("revisions").get_to(v.revisions);
  get_opt(j, "revision_prompts", v.revision_prompts);
}

void to_json(json& j, const ImageRecord& v) {
  j = json{{"id", v.id},         {"prompt", v.prompt},           {"seed", v.seed},
           {"descriptor", v.descriptor}, {"height", v.height}, {"width", v.width},
           {"sigma", v.sigma},   {"sketch_file", v.sketch_file}, {"color_file", v.color_file}};
}
void from_json(const json& j, ImageRecord& v) {
  j.at("id").get_to(v.id);
  j.at("prompt").get_to(v.prompt);
  j.at("seed").get_to(v.seed);
  j.at("descriptor").get_to(v.descriptor);
  j.at("height").get_to(v.height);
  j.at("width").get_to(v.width);
  j.at("sigma").get_to(v.sigma);
  j.at("sketch_file").get_to(v.sketch_file);
  get_opt(j, "color_file", v.color_file);
}

void to_json(json& j, const TraceError& v) {
  j = json{{"code", v.code}, {"message", v.message}, {"cycle", v.cycle}};
}
void from_json(const json& j, TraceError& v) {
  j.at("code").get_to(v.code);
  j.at("message").get_to(v.message);
  j.at("cycle").get_to(v.cycle);
}

void to_json(json& j, const ThoughtTrace& v) {
  j = json{{"run_seed", v.run_seed},
           {"backend_mode", v.backend_mode},
           {"cycles", v.cycles},
           {"needs", v.needs},
           {"images", v.images}};
  if (v.error) j["error"] = *v.error;
}
void from_json(const json& j, ThoughtTrace& v) {
  j.at("run_seed").get_to(v.run_seed);
  j.at("backend_mode").get_to(v.backend_mode);
  j.at("cycles").get_to(v.cycles);
  get_opt(j, "needs", v.needs);
  get_opt(j, "images", v.images);
  get_opt(j, "error", v.error);
}

void to_json(json& j, const BackendConfig& v) {
  j = json{{"mode", v.mode},
           {"base_url", opt_to_json(v.base_url)},
           {"timeout_ms", v.timeout_ms},
           {"retries", v.retries},
           {"embed_dim", v.embed_dim},
           {"max_in_flight", v.max_in_flight},
           {"fixture_bundle", opt_to_json(v.fixture_bundle)}};
}
void from_json(const json& j, BackendConfig& v) {
  get_opt(j, "mode", v.mode);
  get_opt(j, "base_url", v.base_url);
  get_opt(j, "timeout_ms", v.timeout_ms);
  get_opt(j, "retries", v.retries);
  get_opt(j, "embed_dim", v.embed_dim);
  get_opt(j, "max_in_flight", v.max_in_flight);
  get_opt(j, "fixture_bundle", v.fixture_bundle);
}

void to_json(json& j, const TemplateRule& v) { j = json{{"triggers", v.triggers}, {"completion", v.completion}}; }
void from_json(const json& j, TemplateRule& v) {
  j.at("triggers").get_to(v.triggers);
  j.at("completion").get_to(v.completion);
}

void to_json(json& j, const GenerationParams& v) {
  j = json{{"max_length", v.max_length}, {"temperature", v.temperature}, {"delimiter", v.delimiter}};
}
void from_json(const json& j, GenerationParams& v) {
  get_opt(j, "max_length", v.max_length);
  get_opt(j, "temperature", v.temperature);
  get_opt(j, "delimiter", v.delimiter);
}

void to_json(json& j, const WhatIfInjection& v) {
  j = json{{"cycle_index", v.cycle_index}, {"stimulus", v.stimulus}};
}
void from_json(const json& j, WhatIfInjection& v) {
  j.at("cycle_index").get_to(v.cycle_index);
  j.at("stimulus").get_to(v.stimulus);
}

void to_json(json& j, const ImageSize& v) { j = json::array({v.height, v.width}); }
void from_json(const json& j, ImageSize& v) {
  // [H, W] or {"height": H, "width": W}
  if (j.is_array()) {
    if (j.size() != 2) throw Error(ErrorCode::ParseError, "image_size must be [H, W]");
    j[0].get_to(v.height);
    j[1].get_to(v.width);
    return;
  }
  j.at("height").get_to(v.height);
  j.at("width").get_to(v.width);
}

void to_json(json& j, const ScenarioConfig& v) {
  j = json{{"needs", v.needs},
           {"context_source", v.context_source},
           {"fixture_path", opt_to_json(v.fixture_path)},
           {"perception_image", opt_to_json(v.perception_image)},
           {"max_cycles", v.max_cycles},
           {"image_size", v.image_size},
           {"sigma", v.sigma},
           {"seed", v.seed},
           {"whatif_injections", v.whatif_injections},
           {"backend", v.backend},
           {"generation", v.generation},
           {"min_confidence", v.min_confidence},
           {"capacity", v.capacity},
           {"rules", v.rules},
           {"custom_queries", v.custom_queries}};
}
void from_json(const json& j, ScenarioConfig& v) {
  get_opt(j, "needs", v.needs);
  get_opt(j, "context_source", v.context_source);
  get_opt(j, "fixture_path", v.fixture_path);
  get_opt(j, "perception_image", v.perception_image);
  get_opt(j, "max_cycles", v.max_cycles);
  get_opt(j, "image_size", v.image_size);
  get_opt(j, "sigma", v.sigma);
  get_opt(j, "seed", v.seed);
  get_opt(j, "whatif_injections", v.whatif_injections);
  get_opt(j, "backend", v.backend);
  get_opt(j, "generation", v.generation);
  get_opt(j, "min_confidence", v.min_confidence);
  get_opt(j, "capacity", v.capacity);
  get_opt(j, "rules", v.rules);
  get_opt(j, "custom_queries", v.custom_queries);
}

std::string dump_trace(const ThoughtTrace& trace) { return json(trace).dump(2) + "\n"; }

ThoughtTrace parse_trace(const std::string& text) {
  try {
    return json::parse(text).get<ThoughtTrace>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

}  // namespace cogito
