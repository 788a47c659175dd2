#include <cstdlib>
#include <fstream>

#include "doctest.h"

#include "cogito/error.hpp"
#include "cogito/scenario.hpp"
#include "cogito/serialization.hpp"
#include "support.hpp"

using namespace cogito;
using testsupport::Gen;
using testsupport::TempDir;

namespace {

ScenarioConfig valid_config() {
  ScenarioConfig c;
  c.needs = {{NeedId{}, "need the keys to open the door and go out", 0, NeedStatus::pending}};
  c.context_source = ContextSource::fixture_file;
  c.fixture_path = "contexts.txt";
  c.max_cycles = 5;
  return c;
}

bool names(const ValidationReport& r, const std::string& field) {
  return std::any_of(r.begin(), r.end(), [&](const Violation& v) { return v.field == field; });
}

// Random values for every serialized type.
Sentence any_sentence(Gen& g) {
  return {SentenceId{std::to_string(g.integer(0, 999))}, g.sentence(),
          static_cast<SentenceSource>(g.integer(0, 4)), static_cast<std::uint64_t>(g.integer(0, 50))};
}

ScheduledAction any_action(Gen& g) {
  return {ActionId{std::to_string(g.integer(0, 999))}, g.sentence(), NeedId{std::to_string(g.integer(0, 9))},
          g.integer(0, 20), static_cast<ActionStatus>(g.integer(0, 2))};
}

ThoughtCycle any_cycle(Gen& g, std::uint64_t index) {
  ThoughtCycle c;
  c.index = index;
  c.need = NeedId{std::to_string(g.integer(0, 9))};
  for (int i = g.integer(0, 4); i > 0; --i) {
    ContextObservation o{any_sentence(g), g.real(0, 1), std::nullopt};
    if (g.coin()) o.bbox = BoundingBox{g.real(0, 100), g.real(0, 100), g.real(0, 100), g.real(0, 100)};
    c.context_snapshot.push_back(o);
    c.ranking.push_back({o.sentence.id, g.real(-1, 1)});
  }
  c.chosen = SentenceId{std::to_string(g.integer(0, 99))};
  c.prompt = g.sentence() + "\n" + g.sentence();
  for (int i = g.integer(0, 3); i > 0; --i) c.actions.push_back(any_action(g));
  for (int i = g.integer(0, 3); i > 0; --i) {
    c.stimuli.push_back({static_cast<StimulusKind>(g.integer(0, 2)), g.sentence(), index});
  }
  for (int i = g.integer(0, 3); i > 0; --i) {
    c.images.push_back(ImageId{std::to_string(g.integer(0, 99))});
    c.queries.push_back({static_cast<QueryTemplateId>(g.integer(0, 2)), g.sentence(), c.images.back()});
  }
  for (int i = g.integer(0, 2); i > 0; --i) c.revisions.push_back(any_action(g));
  for (int i = g.integer(0, 2); i > 0; --i) c.revision_prompts.push_back(g.sentence());
  return c;
}

ThoughtTrace any_trace(Gen& g) {
  ThoughtTrace t;
  t.run_seed = static_cast<std::uint64_t>(g.integer(0, 1 << 30)) << 20;
  t.backend_mode = static_cast<BackendMode>(g.integer(0, 2));
  for (int i = g.integer(0, 4), k = 0; k < i; ++k) t.cycles.push_back(any_cycle(g, static_cast<std::uint64_t>(k)));
  for (int i = g.integer(0, 3); i > 0; --i) {
    t.needs.push_back({NeedId{std::to_string(i)}, g.sentence(), g.integer(0, 5), static_cast<NeedStatus>(g.integer(0, 2))});
  }
  for (int i = g.integer(0, 3); i > 0; --i) {
    t.images.push_back({ImageId{std::to_string(i)}, g.sentence(), static_cast<std::uint64_t>(g.integer(0, 1000)),
                        any_sentence(g), g.integer(8, 64), g.integer(8, 64), g.real(0.1, 5), "cycle0_action0.pgm",
                        g.coin() ? "cycle0_action0.ppm" : ""});
  }
  if (g.coin()) t.error = TraceError{"Timeout", g.sentence(), static_cast<std::uint64_t>(g.integer(0, 9))};
  return t;
}

}  // namespace

TEST_CASE("validate_scenario examples") {
  CHECK(validate_scenario(valid_config()).empty());

  auto empty_text = valid_config();
  empty_text.needs[0].text = "";
  const auto r1 = validate_scenario(empty_text);
  REQUIRE(r1.size() == 1);
  CHECK(r1[0].field == "needs[0].text");

  auto no_path = valid_config();
  no_path.fixture_path.reset();
  const auto r2 = validate_scenario(no_path);
  REQUIRE(r2.size() == 1);
  CHECK(r2[0].field == "fixture_path");
}

TEST_CASE("validate_scenario reports every violation") {
  auto c = valid_config();
  c.needs.push_back({NeedId{}, "  ", -1, NeedStatus::pending});
  c.max_cycles = kMaxCycles + 1;
  c.image_size = {4, 64};
  c.sigma = 0.0;
  c.whatif_injections.push_back({0, {StimulusKind::hypothetical, "not a question", 0}});
  c.backend.mode = BackendMode::remote;
  c.generation.delimiter = "";
  c.min_confidence = 2.0;
  const auto r = validate_scenario(c);
  for (const char* f : {"needs[1].text", "needs[1].priority", "max_cycles", "image_size.height", "sigma",
                        "whatif_injections[0].stimulus", "backend.base_url", "generation.delimiter",
                        "min_confidence"}) {
    CHECK_MESSAGE(names(r, f), f);
  }
  CHECK(r.size() == 9);
}

TEST_CASE("perception source needs an image and forbids fixture_path") {
  auto c = valid_config();
  c.context_source = ContextSource::perception_backend;
  const auto r = validate_scenario(c);
  CHECK(names(r, "fixture_path"));
  CHECK(names(r, "perception_image"));
}

TEST_CASE("Stimulus::make enforces the question form") {
  CHECK(Stimulus::make(StimulusKind::hypothetical, "What if the key doesn't open the door?", 0).text.size() > 0);
  CHECK_THROWS_AS(Stimulus::make(StimulusKind::hypothetical, "the key fails", 0), Error);
  CHECK_THROWS_AS(Stimulus::make(StimulusKind::description, " ", 0), Error);
  CHECK_NOTHROW(Stimulus::make(StimulusKind::goal, "leave the room", 0));
}

TEST_CASE("IdGenerator hands out decimal ids in order") {
  IdGenerator ids(5);
  CHECK(ids.next<NeedId>().value == "5");
  CHECK(ids.next<ImageId>().value == "6");
  CHECK(ids.peek() == 7);
}

TEST_CASE("property: trace serialization round trip") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Gen g(seed);
    const auto t = any_trace(g);
    const auto text = dump_trace(t);
    const auto back = parse_trace(text);
    CHECK(back == t);
    CHECK(dump_trace(back) == text);
  }
}

TEST_CASE("scenario round trip and loading") {
  TempDir dir("scenario");
  auto c = valid_config();
  c.whatif_injections.push_back({0, {StimulusKind::hypothetical, "What if the key doesn't open the door?", 0}});
  c.backend.mode = BackendMode::fixture;
  c.backend.fixture_bundle = "bundle.json";
  c.rules = {{{"a"}, "b"}};
  c.custom_queries = {"Why \"{scene}\"?"};
  const json j = c;
  CHECK(j.at("image_size") == json::array({64, 64}));
  CHECK(j.get<ScenarioConfig>() == c);

  std::ofstream(dir / "s.json") << j.dump(2);
  const auto loaded = load_scenario(dir / "s.json");
  CHECK(loaded.fixture_path == (dir / "contexts.txt").lexically_normal().string());
  CHECK(loaded.backend.fixture_bundle == (dir / "bundle.json").lexically_normal().string());
  CHECK(loaded.whatif_injections == c.whatif_injections);

  try {
    load_scenario(dir / "absent.json");
    FAIL("expected FileNotFound");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FileNotFound);
  }
  std::ofstream(dir / "broken.json") << "{\"needs\": [";
  try {
    load_scenario(dir / "broken.json");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
  }
}

TEST_CASE("bbox accepts arrays and objects") {
  CHECK(json::parse("[1,2,3,4]").get<BoundingBox>() == BoundingBox{1, 2, 3, 4});
  CHECK(json::parse(R"({"x":1,"y":2,"w":3,"h":4})").get<BoundingBox>() == BoundingBox{1, 2, 3, 4});
  CHECK_THROWS(json::parse("[1,2]").get<BoundingBox>());
}

TEST_CASE("backend env overrides") {
  BackendConfig cfg;
  setenv("COGITO_BACKEND_MODE", "remote", 1);
  setenv("COGITO_BACKEND_URL", "http://localhost:8123", 1);
  setenv("COGITO_TIMEOUT_MS", "1500", 1);
  apply_backend_env(cfg);
  CHECK(cfg.mode == BackendMode::remote);
  CHECK(cfg.base_url == "http://localhost:8123");
  CHECK(cfg.timeout_ms == 1500);

  BackendConfig offline;
  setenv("COGITO_BACKEND_MODE", "offline", 1);
  apply_backend_env(offline);
  CHECK_FALSE(offline.base_url.has_value());
  CHECK(validate_scenario([&] {
          auto c = valid_config();
          c.backend = offline;
          return c;
        }())
            .empty());

  setenv("COGITO_TIMEOUT_MS", "soon", 1);
  BackendConfig untouched;
  apply_backend_env(untouched);
  CHECK(untouched.timeout_ms == 30000);
  unsetenv("COGITO_BACKEND_MODE");
  unsetenv("COGITO_BACKEND_URL");
  unsetenv("COGITO_TIMEOUT_MS");
}
