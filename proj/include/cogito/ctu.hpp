#pragma once
// The cognitive thinking unit: prompt construction, action inference,
// reasoning queries, what-if revision and the thinking loop itself.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cogito/backend.hpp"
#include "cogito/model.hpp"
#include "cogito/scenario.hpp"

namespace cogito {

struct PromptText {
  std::string text;
  std::size_t context_count = 0;
  std::string need_text;
};

inline constexpr std::string_view kPromptHeader =
    "You are the thinking unit of an agent. Given the observations in the context, "
    "propose actions that address the need.";
inline constexpr std::string_view kActionRequest = "Action: suggest appropriate actions, separated by \" - \".";

// Header, "Context:" with numbered sentences, "Need:", then the action
// request. Throws EmptyContext.
PromptText build_prompt(std::span<const Sentence> contexts, const Need& need);

// build_prompt with "Plan:" (numbered current plan) and "Hypothesis:" lines
// inserted ahead of the action request.
PromptText build_revision_prompt(std::span<const Sentence> contexts, const Need& need,
                                 std::span<const std::string> plan, const Stimulus& hypothesis);

// Throws PreconditionViolation when max_length < 1 or temperature < 0;
// backend errors propagate.
std::string infer_actions(const PromptText& prompt, TextGenerator& generator, std::int64_t max_length,
                          double temperature);

// Splits on the delimiter, trims, drops empty parts. Throws NoActions.
std::vector<std::string> parse_actions(std::string_view raw, std::string_view delimiter = " - ");

std::vector<QueryTemplate> default_query_templates();

// One query per template, in template order.
std::vector<ReasoningQuery> generate_reasoning_queries(const MentalImage& image,
                                                       std::span<const QueryTemplate> templates);
std::vector<ReasoningQuery> generate_reasoning_queries(const MentalImage& image);

struct WhatIfState {
  std::vector<Sentence> contexts;
  Need need;
  std::vector<std::string> plan;  // current action texts, in order
};

struct WhatIfResult {
  PromptText prompt;
  std::string raw;
  std::vector<std::string> revised;
};

// Throws WrongStimulusKind unless the stimulus is hypothetical.
WhatIfResult handle_whatif(const Stimulus& stimulus, const WhatIfState& state, TextGenerator& generator,
                           const GenerationParams& params);

// An image generated during a run together with its sketch.
struct RenderedImage {
  MentalImage image;
  SketchImage sketch;
  std::string sketch_file;
  std::string color_file;
};

struct RunResult {
  ThoughtTrace trace;
  std::vector<RenderedImage> rendered;

  bool ok() const { return !trace.error.has_value(); }
};

// Runs up to max_cycles thinking cycles. Backend failures end the run with a
// partial trace carrying an error marker instead of throwing.
// Throws PreconditionViolation when validate_scenario reports violations.
RunResult run_loop(const ScenarioConfig& scenario, Backends& backends, bool keep_color_files = false);

// Self-consistency of a trace: contiguous indices, ranking order, chosen =
// argmax, prompt containment, each action recorded exactly once.
// Returns human-readable problems (empty = consistent).
std::vector<std::string> verify_trace(const ThoughtTrace& trace);

}  // namespace cogito
