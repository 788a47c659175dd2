#include "cogito/model.hpp"

#include "cogito/error.hpp"

namespace cogito {

std::string trim(std::string_view text) {
  constexpr std::string_view kSpace = " \t\r\n\v\f";
  const auto first = text.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(kSpace);
  return std::string(text.substr(first, last - first + 1));
}

std::string stimulus_problem(const Stimulus& stimulus) {
  const std::string text = trim(stimulus.text);
  if (text.empty()) return "text must be non-empty";
  if (stimulus.kind == StimulusKind::hypothetical && text.back() != '?') {
    return "hypothetical stimulus must be phrased as a question ending in '?'";
  }
  return {};
}

Stimulus Stimulus::make(StimulusKind kind, std::string text, std::uint64_t origin_cycle) {
  Stimulus s{kind, std::move(text), origin_cycle};
  if (auto problem = stimulus_problem(s); !problem.empty()) {
    throw Error(ErrorCode::InvalidStimulus, problem);
  }
  return s;
}

std::string_view to_string(BackendMode mode) {
  switch (mode) {
    case BackendMode::offline: return "offline";
    case BackendMode::remote: return "remote";
    case BackendMode::fixture: return "fixture";
  }
  return "offline";
}

std::optional<BackendMode> parse_backend_mode(std::string_view text) {
  if (text == "offline") return BackendMode::offline;
  if (text == "remote") return BackendMode::remote;
  if (text == "fixture") return BackendMode::fixture;
  return std::nullopt;
}

}  // namespace cogito
