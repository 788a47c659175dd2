#include "cogito/ctu.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "cogito/error.hpp"
#include "cogito/image_io.hpp"
#include "cogito/input_data_unit.hpp"
#include "cogito/mental_imagery.hpp"
#include "cogito/needs_unit.hpp"
#include "cogito/semantic_matcher.hpp"

namespace cogito {
namespace {

void append_context(std::ostringstream& out, std::span<const Sentence> contexts, const Need& need) {
  out << kPromptHeader << "\n";
  out << "Context:\n";
  for (std::size_t i = 0; i < contexts.size(); ++i) out << (i + 1) << ". " << contexts[i].text << "\n";
  out << "Need: " << need.text << "\n";
}

std::string replace_all(std::string text, std::string_view placeholder, std::string_view value) {
  for (auto pos = text.find(placeholder); pos != std::string::npos; pos = text.find(placeholder, pos + value.size())) {
    text.replace(pos, placeholder.size(), value);
  }
  return text;
}

// Seeds for images within a run: one block of 1000 per cycle.
std::uint64_t image_seed(std::uint64_t run_seed, std::uint64_t cycle, std::uint64_t slot) {
  return run_seed + cycle * 1000 + slot;
}

}  // namespace

PromptText build_prompt(std::span<const Sentence> contexts, const Need& need) {
  if (contexts.empty()) throw Error(ErrorCode::EmptyContext, "prompt needs at least one context sentence");
  std::ostringstream out;
  append_context(out, contexts, need);
  out << kActionRequest;
  return PromptText{out.str(), contexts.size(), need.text};
}

PromptText build_revision_prompt(std::span<const Sentence> contexts, const Need& need,
                                 std::span<const std::string> plan, const Stimulus& hypothesis) {
  if (contexts.empty()) throw Error(ErrorCode::EmptyContext, "prompt needs at least one context sentence");
  std::ostringstream out;
  append_context(out, contexts, need);
  out << "Plan:" << (plan.empty() ? " " : "\n");
  if (plan.empty()) out << "none\n";
  for (std::size_t i = 0; i < plan.size(); ++i) out << (i + 1) << ". " << plan[i] << "\n";
  out << "Hypothesis: " << trim(hypothesis.text) << "\n";
  out << kActionRequest;
  return PromptText{out.str(), contexts.size(), need.text};
}

std::string infer_actions(const PromptText& prompt, TextGenerator& generator, std::int64_t max_length,
                          double temperature) {
  if (max_length < 1) throw Error(ErrorCode::PreconditionViolation, "max_length must be >= 1");
  if (!(temperature >= 0.0)) throw Error(ErrorCode::PreconditionViolation, "temperature must be >= 0");
  return generator.generate(prompt.text, max_length, temperature);
}

std::vector<std::string> parse_actions(std::string_view raw, std::string_view delimiter) {
  if (delimiter.empty()) throw Error(ErrorCode::PreconditionViolation, "delimiter is empty");
  std::vector<std::string> actions;
  std::size_t pos = 0;
  while (true) {
    const auto next = raw.find(delimiter, pos);
    auto part = trim(raw.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (!part.empty()) actions.push_back(std::move(part));
    if (next == std::string_view::npos) break;
    pos = next + delimiter.size();
  }
  if (actions.empty()) throw Error(ErrorCode::NoActions, "completion contains no actions");
  return actions;
}

std::vector<QueryTemplate> default_query_templates() {
  return {
      {QueryTemplateId::feasibility, "Is the depicted scenario \"{scene}\" physically or logically feasible?"},
      {QueryTemplateId::preconditions,
       "What preconditions or resources are required to realize the configuration \"{scene}\"?"},
  };
}

std::vector<ReasoningQuery> generate_reasoning_queries(const MentalImage& image,
                                                       std::span<const QueryTemplate> templates) {
  std::vector<ReasoningQuery> out;
  out.reserve(templates.size());
  for (const auto& t : templates) {
    out.push_back(ReasoningQuery{t.id, replace_all(t.pattern, "{scene}", image.descriptor.text), image.id});
  }
  return out;
}

std::vector<ReasoningQuery> generate_reasoning_queries(const MentalImage& image) {
  const auto templates = default_query_templates();
  return generate_reasoning_queries(image, templates);
}

WhatIfResult handle_whatif(const Stimulus& stimulus, const WhatIfState& state, TextGenerator& generator,
                           const GenerationParams& params) {
  if (stimulus.kind != StimulusKind::hypothetical) {
    throw Error(ErrorCode::WrongStimulusKind, "what-if handling needs a hypothetical stimulus");
  }
  WhatIfResult result;
  result.prompt = build_revision_prompt(state.contexts, state.need, state.plan, stimulus);
  result.raw = infer_actions(result.prompt, generator, params.max_length, params.temperature);
  result.revised = parse_actions(result.raw, params.delimiter);
  return result;
}

// ---------------------------------------------------------------------------
// The loop

namespace {

class Loop {
 public:
  Loop(const ScenarioConfig& scenario, Backends& backends, bool keep_color)
      : scenario_(scenario),
        backends_(backends),
        keep_color_(keep_color),
        store_(ids_),
        sketch_(SketchParams::with_sigma(scenario.sigma)) {
    templates_ = default_query_templates();
    for (const auto& q : scenario.custom_queries) templates_.push_back({QueryTemplateId::custom, q});
    snapshot_.capacity = static_cast<std::size_t>(scenario.capacity);
  }

  RunResult run() {
    result_.trace.run_seed = scenario_.seed;
    result_.trace.backend_mode = backends_.mode;
    std::uint64_t cycle = 0;
    try {
      for (const auto& need : scenario_.needs) store_.add_need(need.text, need.priority);
      if (scenario_.context_source == ContextSource::fixture_file) {
        snapshot_ = append_observations(std::move(snapshot_), load_fixture(*scenario_.fixture_path, ids_, 0));
      }
      for (; cycle < static_cast<std::uint64_t>(scenario_.max_cycles); ++cycle) {
        if (!step(cycle)) break;
      }
    } catch (const Error& e) {
      result_.trace.error = TraceError{std::string(to_string(e.code())), e.what(), cycle};
    }
    result_.trace.needs = store_.needs();
    return std::move(result_);
  }

 private:
  struct FollowUp {
    NeedId need;
    Stimulus hypothesis;
    std::vector<std::string> plan;
    MentalImage base;
  };

  bool step(std::uint64_t cycle) {
    snapshot_.cycle = cycle;
    if (scenario_.context_source == ContextSource::perception_backend) perceive();

    Need need;
    if (follow_up_) {
      need = *store_.find(follow_up_->need);
    } else {
      auto next = store_.pop_next();
      if (!next) return false;
      need = *next;
    }

    ThoughtCycle rec;
    rec.index = cycle;
    rec.need = need.id;
    rec.context_snapshot = snapshot_.observations;
    const auto contexts = snapshot_.sentences();

    const Sentence need_sentence{SentenceId{need.id.value}, need.text, SentenceSource::generated, cycle};
    const auto match = best_match(need_sentence, contexts, *backends_.embedder);
    rec.ranking = match.ranking.entries;
    rec.chosen = match.sentence.id;

    std::vector<std::string> plan;
    std::optional<MentalImage> last_image;
    std::size_t slot = 0;

    if (follow_up_) {
      // re-apply the pending hypothesis to the revised plan
      const FollowUp pending = std::move(*follow_up_);
      follow_up_.reset();
      auto res = handle_whatif(pending.hypothesis, {contexts, need, pending.plan}, *backends_.generator,
                               scenario_.generation);
      rec.prompt = res.prompt.text;
      auto revisions = store_.schedule_actions(need.id, res.revised);
      last_image = pending.base;
      for (std::size_t j = 0; j < revisions.size(); ++j) {
        last_image = revise(rec, *last_image, revisions[j], cycle, slot++, "revision", j);
      }
      rec.revisions = std::move(revisions);
      plan = std::move(res.revised);
    } else {
      const auto prompt = build_prompt(contexts, need);
      rec.prompt = prompt.text;
      const auto raw =
          infer_actions(prompt, *backends_.generator, scenario_.generation.max_length, scenario_.generation.temperature);
      plan = parse_actions(raw, scenario_.generation.delimiter);
      rec.actions = store_.schedule_actions(need.id, plan);
      for (std::size_t j = 0; j < rec.actions.size(); ++j) {
        auto stimulus = Stimulus{StimulusKind::description, rec.actions[j].text, cycle};
        rec.stimuli.push_back(stimulus);
        last_image = imagine(rec, stimulus, cycle, slot++, "action", j);
      }
    }

    std::size_t revision_file = rec.revisions.size();
    std::size_t stimulus_file = 0;
    for (const auto& injection : scenario_.whatif_injections) {
      if (injection.cycle_index != cycle) continue;
      Stimulus stimulus = injection.stimulus;
      stimulus.origin_cycle = cycle;
      rec.stimuli.push_back(stimulus);

      if (stimulus.kind != StimulusKind::hypothetical) {
        last_image = imagine(rec, stimulus, cycle, slot++, "stimulus", stimulus_file++);
        continue;
      }
      auto res = handle_whatif(stimulus, {contexts, need, plan}, *backends_.generator, scenario_.generation);
      rec.revision_prompts.push_back(res.prompt.text);
      auto revisions = store_.schedule_actions(need.id, res.revised);
      if (!last_image) {
        last_image = imagine(rec, Stimulus{StimulusKind::description, need.text, cycle}, cycle, slot++, "stimulus",
                             stimulus_file++);
      }
      for (const auto& revision : revisions) {
        last_image = revise(rec, *last_image, revision, cycle, slot++, "revision", revision_file++);
      }
      rec.revisions.insert(rec.revisions.end(), revisions.begin(), revisions.end());
      plan = res.revised;
      follow_up_ = FollowUp{need.id, stimulus, plan, *last_image};
    }

    if (!follow_up_) store_.complete(need.id);
    result_.trace.cycles.push_back(std::move(rec));
    return true;
  }

  void perceive() {
    if (!backends_.captioner) {
      throw Error(ErrorCode::BackendUnavailable,
                  std::string(to_string(backends_.mode)) + " mode has no caption backend");
    }
    const auto bytes = read_file_bytes(*scenario_.perception_image);
    const auto response = backends_.captioner->caption(bytes, scenario_.min_confidence);
    snapshot_ = ingest_observations(std::move(snapshot_), response, scenario_.min_confidence, ids_);
  }

  static std::string file_name(std::uint64_t cycle, std::string_view kind, std::size_t index, std::string_view ext) {
    return "cycle" + std::to_string(cycle) + "_" + std::string(kind) + std::to_string(index) + std::string(ext);
  }

  MentalImage imagine(ThoughtCycle& rec, const Stimulus& stimulus, std::uint64_t cycle, std::size_t slot,
                      std::string_view kind, std::size_t index) {
    auto image = generate_mental_image(stimulus, *backends_.images, static_cast<int>(scenario_.image_size.height),
                                       static_cast<int>(scenario_.image_size.width),
                                       image_seed(scenario_.seed, cycle, slot), ids_);
    commit(rec, image, file_name(cycle, kind, index, ""));
    return image;
  }

  MentalImage revise(ThoughtCycle& rec, const MentalImage& base, const ScheduledAction& revision, std::uint64_t cycle,
                     std::size_t slot, std::string_view kind, std::size_t index) {
    rec.stimuli.push_back(Stimulus{StimulusKind::description, revision.text, cycle});
    const Sentence knowledge{SentenceId{}, revision.text, SentenceSource::generated, cycle};
    auto image = revise_image(base, knowledge, *backends_.images, image_seed(scenario_.seed, cycle, slot), ids_);
    commit(rec, image, file_name(cycle, kind, index, ""));
    return image;
  }

  void commit(ThoughtCycle& rec, const MentalImage& image, const std::string& stem) {
    RenderedImage rendered{image, sketchify(image, sketch_), stem + ".pgm", keep_color_ ? stem + ".ppm" : ""};
    rec.images.push_back(image.id);
    auto queries = generate_reasoning_queries(image, templates_);
    rec.queries.insert(rec.queries.end(), queries.begin(), queries.end());
    result_.trace.images.push_back(ImageRecord{image.id, image.prompt, image.seed, image.descriptor,
                                               image.pixels.height, image.pixels.width, sketch_.sigma,
                                               rendered.sketch_file, rendered.color_file});
    result_.rendered.push_back(std::move(rendered));
  }

  const ScenarioConfig& scenario_;
  Backends& backends_;
  bool keep_color_;
  IdGenerator ids_;
  NeedStore store_;
  ContextSnapshot snapshot_;
  SketchParams sketch_;
  std::vector<QueryTemplate> templates_;
  std::optional<FollowUp> follow_up_;
  RunResult result_;
};

}  // namespace

RunResult run_loop(const ScenarioConfig& scenario, Backends& backends, bool keep_color_files) {
  const auto report = validate_scenario(scenario);
  if (!report.empty()) {
    std::string joined;
    for (const auto& v : report) joined += "\n  " + v.field + ": " + v.message;
    throw Error(ErrorCode::PreconditionViolation, "invalid scenario:" + joined);
  }
  if (!backends.embedder || !backends.generator || !backends.images) {
    throw Error(ErrorCode::PreconditionViolation, "backend set is incomplete");
  }
  return Loop(scenario, backends, keep_color_files).run();
}

std::vector<std::string> verify_trace(const ThoughtTrace& trace) {
  std::vector<std::string> problems;
  std::map<std::string, const Need*> needs;
  for (const auto& n : trace.needs) needs[n.id.value] = &n;
  std::set<std::string> image_ids;
  for (const auto& img : trace.images) image_ids.insert(img.id.value);
  std::set<std::string> action_ids;

  for (std::size_t i = 0; i < trace.cycles.size(); ++i) {
    const auto& c = trace.cycles[i];
    const std::string where = "cycle " + std::to_string(i) + ": ";
    if (c.index != i) problems.push_back(where + "index is " + std::to_string(c.index));

    if (c.ranking.empty()) {
      problems.push_back(where + "empty ranking");
    } else {
      for (std::size_t k = 1; k < c.ranking.size(); ++k) {
        if (c.ranking[k].score > c.ranking[k - 1].score) problems.push_back(where + "ranking not sorted");
      }
      const auto best = std::max_element(c.ranking.begin(), c.ranking.end(),
                                         [](const RankingEntry& a, const RankingEntry& b) { return a.score < b.score; });
      if (c.chosen != c.ranking.front().sentence_id || best->score != c.ranking.front().score) {
        problems.push_back(where + "chosen sentence is not the argmax of the ranking");
      }
    }

    std::multiset<std::string> ranked, observed;
    for (const auto& e : c.ranking) ranked.insert(e.sentence_id.value);
    for (const auto& o : c.context_snapshot) observed.insert(o.sentence.id.value);
    if (ranked != observed) problems.push_back(where + "ranking ids differ from the context snapshot");

    for (const auto& o : c.context_snapshot) {
      if (c.prompt.find(o.sentence.text) == std::string::npos) {
        problems.push_back(where + "prompt lacks context \"" + o.sentence.text + "\"");
      }
    }
    if (auto it = needs.find(c.need.value); it == needs.end()) {
      problems.push_back(where + "unknown need " + c.need.value);
    } else if (c.prompt.find(it->second->text) == std::string::npos) {
      problems.push_back(where + "prompt lacks the need text");
    }

    for (const auto* list : {&c.actions, &c.revisions}) {
      for (const auto& a : *list) {
        if (!action_ids.insert(a.id.value).second) problems.push_back(where + "action " + a.id.value + " repeated");
        if (a.origin_need != c.need) problems.push_back(where + "action " + a.id.value + " has a foreign need");
      }
    }
    for (const auto& id : c.images) {
      if (!image_ids.contains(id.value)) problems.push_back(where + "image " + id.value + " has no record");
    }
  }
  return problems;
}

}  // namespace cogito
