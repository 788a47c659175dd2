#pragma once
// JSON mapping for the trace and scenario files. Field names match the type
// field names one to one; pixel arrays are never embedded.

#include <filesystem>
#include <string>

#include "json.hpp"

#include "cogito/model.hpp"
#include "cogito/scenario.hpp"

namespace cogito {

using json = nlohmann::json;

NLOHMANN_JSON_SERIALIZE_ENUM(SentenceSource, {
    {SentenceSource::perception, "perception"},
    {SentenceSource::audio, "audio"},
    {SentenceSource::tactile, "tactile"},
    {SentenceSource::fixture, "fixture"},
    {SentenceSource::generated, "generated"},
})

NLOHMANN_JSON_SERIALIZE_ENUM(NeedStatus, {
    {NeedStatus::pending, "pending"},
    {NeedStatus::active, "active"},
    {NeedStatus::satisfied, "satisfied"},
})

NLOHMANN_JSON_SERIALIZE_ENUM(ActionStatus, {
    {ActionStatus::planned, "planned"},
    {ActionStatus::executed, "executed"},
    {ActionStatus::abandoned, "abandoned"},
})

NLOHMANN_JSON_SERIALIZE_ENUM(StimulusKind, {
    {StimulusKind::description, "description"},
    {StimulusKind::hypothetical, "hypothetical"},
    {StimulusKind::goal, "goal"},
})

NLOHMANN_JSON_SERIALIZE_ENUM(QueryTemplateId, {
    {QueryTemplateId::feasibility, "feasibility"},
    {QueryTemplateId::preconditions, "preconditions"},
    {QueryTemplateId::custom, "custom"},
})

NLOHMANN_JSON_SERIALIZE_ENUM(BackendMode, {
    {BackendMode::offline, "offline"},
    {BackendMode::remote, "remote"},
    {BackendMode::fixture, "fixture"},
})

NLOHMANN_JSON_SERIALIZE_ENUM(ContextSource, {
    {ContextSource::fixture_file, "fixture_file"},
    {ContextSource::perception_backend, "perception_backend"},
})

template <class Tag>
void to_json(json& j, const Id<Tag>& id) {
  j = id.value;
}

template <class Tag>
void from_json(const json& j, Id<Tag>& id) {
  id.value = j.get<std::string>();
}

void to_json(json& j, const Sentence& v);
void from_json(const json& j, Sentence& v);
void to_json(json& j, const BoundingBox& v);
void from_json(const json& j, BoundingBox& v);
void to_json(json& j, const ContextObservation& v);
void from_json(const json& j, ContextObservation& v);
void to_json(json& j, const Need& v);
void from_json(const json& j, Need& v);
void to_json(json& j, const ScheduledAction& v);
void from_json(const json& j, ScheduledAction& v);
void to_json(json& j, const Stimulus& v);
void from_json(const json& j, Stimulus& v);
void to_json(json& j, const ReasoningQuery& v);
void from_json(const json& j, ReasoningQuery& v);
void to_json(json& j, const RankingEntry& v);
void from_json(const json& j, RankingEntry& v);
void to_json(json& j, const ThoughtCycle& v);
void from_json(const json& j, ThoughtCycle& v);
void to_json(json& j, const ImageRecord& v);
void from_json(const json& j, ImageRecord& v);
void to_json(json& j, const TraceError& v);
void from_json(const json& j, TraceError& v);
void to_json(json& j, const ThoughtTrace& v);
void from_json(const json& j, ThoughtTrace& v);

void to_json(json& j, const BackendConfig& v);
void from_json(const json& j, BackendConfig& v);
void to_json(json& j, const TemplateRule& v);
void from_json(const json& j, TemplateRule& v);
void to_json(json& j, const GenerationParams& v);
void from_json(const json& j, GenerationParams& v);
void to_json(json& j, const WhatIfInjection& v);
void from_json(const json& j, WhatIfInjection& v);
void to_json(json& j, const ImageSize& v);
void from_json(const json& j, ImageSize& v);
void to_json(json& j, const ScenarioConfig& v);
void from_json(const json& j, ScenarioConfig& v);

// Serialized trace text: 2-space indented JSON with a trailing newline.
std::string dump_trace(const ThoughtTrace& trace);
ThoughtTrace parse_trace(const std::string& text);

}  // namespace cogito
