#include "cogito/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>

#include "cogito/backend.hpp"
#include "cogito/ctu.hpp"
#include "cogito/error.hpp"
#include "cogito/image_io.hpp"
#include "cogito/scenario.hpp"
#include "cogito/serialization.hpp"

namespace cogito {
namespace {

std::string format_score(double score) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", score);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

std::string ranking_report(const ThoughtTrace& trace) {
  std::map<std::string, std::string> need_text;
  for (const auto& n : trace.needs) need_text[n.id.value] = n.text;
  std::string text;
  for (const auto& c : trace.cycles) {
    std::vector<Sentence> sentences;
    for (const auto& o : c.context_snapshot) sentences.push_back(o.sentence);
    text += "Cycle " + std::to_string(c.index) + " need: " + need_text[c.need.value] + "\n";
    text += format_ranking(Ranking{c.ranking}, sentences);
    text += "\n";
  }
  return text;
}

void write_artifacts(const RunResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir / "trace.json", dump_trace(result.trace));
  write_text(dir / "ranking.txt", ranking_report(result.trace));
  for (const auto& r : result.rendered) {
    write_pgm(r.sketch.pixels, dir / r.sketch_file);
    if (!r.color_file.empty()) write_ppm(r.image.pixels, dir / r.color_file);
  }
}

void log_cycles(const ThoughtTrace& trace, std::ostream& out) {
  for (const auto& c : trace.cycles) {
    std::string chosen;
    for (const auto& o : c.context_snapshot) {
      if (o.sentence.id == c.chosen) chosen = o.sentence.text;
    }
    out << "cycle " << c.index << ": need " << c.need.value << ", best context \"" << chosen << "\"\n";
    for (const auto& a : c.actions) out << "  action: " << a.text << "\n";
    for (const auto& s : c.stimuli) {
      if (s.kind == StimulusKind::hypothetical) out << "  what-if: " << s.text << "\n";
    }
    for (const auto& a : c.revisions) out << "  revised: " << a.text << "\n";
  }
}

}  // namespace

std::string format_ranking(const Ranking& ranking, std::span<const Sentence> sentences) {
  std::map<std::string, double> scores;
  for (const auto& e : ranking.entries) scores[e.sentence_id.value] = e.score;
  for (const auto& e : ranking.entries) {
    const bool known = std::any_of(sentences.begin(), sentences.end(),
                                   [&](const Sentence& s) { return s.id == e.sentence_id; });
    if (!known) throw Error(ErrorCode::UnknownSentenceId, "ranking references unknown sentence " + e.sentence_id.value);
  }
  const std::string top = ranking.entries.empty() ? std::string() : ranking.top().sentence_id.value;
  std::string text;
  for (const auto& s : sentences) {
    const auto it = scores.find(s.id.value);
    if (it == scores.end()) continue;
    text += s.text + " - Similarity: " + format_score(it->second);
    if (s.id.value == top) text += " *";
    text += "\n";
  }
  return text;
}

int run(const CliOptions& options, std::ostream& out, std::ostream& err) {
  ScenarioConfig scenario;
  try {
    scenario = load_scenario(options.scenario_path);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  if (options.backend) scenario.backend.mode = *options.backend;
  apply_backend_env(scenario.backend);
  // the flag outranks COGITO_BACKEND_MODE; the URL still comes from the env
  if (options.backend) scenario.backend.mode = *options.backend;
  if (options.max_cycles) scenario.max_cycles = *options.max_cycles;
  if (options.seed) scenario.seed = *options.seed;
  if (options.sigma) scenario.sigma = *options.sigma;

  const auto violations = validate_scenario(scenario);
  if (!violations.empty()) {
    for (const auto& v : violations) err << "violation: " << v.field << ": " << v.message << "\n";
    return kExitValidation;
  }

  RunResult result;
  result.trace.run_seed = scenario.seed;
  result.trace.backend_mode = scenario.backend.mode;
  try {
    auto backends = make_backends(scenario.backend, scenario.rules);
    result = run_loop(scenario, backends, options.save_color);
  } catch (const Error& e) {
    result.trace.error = TraceError{std::string(to_string(e.code())), e.what(), 0};
  } catch (const std::exception& e) {
    result.trace.error = TraceError{"Internal", e.what(), 0};
  }

  log_cycles(result.trace, out);
  try {
    write_artifacts(result, options.out_dir);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitBackend;
  }

  if (result.trace.error) {
    err << "error at cycle " << result.trace.error->cycle << ": " << result.trace.error->message << "\n";
    return kExitBackend;
  }
  out << "wrote " << result.trace.cycles.size() << " cycle(s) and " << result.rendered.size() << " sketch(es) to "
      << options.out_dir.string() << "\n";
  return kExitOk;
}

}  // namespace cogito
