#include <sstream>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cogito/backend.hpp"
#include "cogito/cli.hpp"
#include "cogito/ctu.hpp"
#include "cogito/error.hpp"
#include "cogito/image_io.hpp"
#include "cogito/mental_imagery.hpp"
#include "cogito/scenario.hpp"
#include "cogito/semantic_matcher.hpp"
#include "cogito/serialization.hpp"

namespace py = pybind11;
using namespace cogito;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

GrayImage gray_from(const U8Array& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D uint8 array");
  GrayImage img(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)));
  std::copy(a.data(), a.data() + a.size(), img.pixels.begin());
  return img;
}

RgbImage rgb_from(const U8Array& a) {
  if (a.ndim() != 3 || a.shape(2) != 3) throw py::value_error("expected an H x W x 3 uint8 array");
  RgbImage img(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)));
  std::copy(a.data(), a.data() + a.size(), img.pixels.begin());
  return img;
}

U8Array to_array(const GrayImage& img) {
  U8Array out({img.height, img.width});
  std::copy(img.pixels.begin(), img.pixels.end(), out.mutable_data());
  return out;
}

U8Array to_array(const RgbImage& img) {
  U8Array out({img.height, img.width, 3});
  std::copy(img.pixels.begin(), img.pixels.end(), out.mutable_data());
  return out;
}

std::vector<Sentence> as_sentences(const std::vector<std::string>& texts) {
  std::vector<Sentence> out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    out.push_back({SentenceId{std::to_string(i)}, texts[i], SentenceSource::fixture, 0});
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_cogito, m) {
  m.doc() = "Native core of the cogito thinking loop";

  static py::exception<Error> error_type(m, "CogitoError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  m.def("cosine_similarity", [](std::vector<double> a, std::vector<double> b) {
    return cosine_similarity(EmbeddingVector(std::move(a)), EmbeddingVector(std::move(b)));
  });

  m.def(
      "rank_contexts",
      [](std::vector<double> need, const std::vector<std::vector<double>>& contexts,
         const std::vector<std::string>& texts) {
        if (texts.size() != contexts.size()) throw py::value_error("texts and contexts differ in length");
        std::vector<ContextVector> cv;
        for (std::size_t i = 0; i < contexts.size(); ++i) {
          cv.push_back({SentenceId{std::to_string(i)}, texts[i], EmbeddingVector(contexts[i])});
        }
        std::vector<std::pair<std::size_t, double>> out;
        for (const auto& e : rank_contexts(EmbeddingVector(std::move(need)), cv).entries) {
          out.emplace_back(std::stoul(e.sentence_id.value), e.score);
        }
        return out;
      },
      py::arg("need"), py::arg("contexts"), py::arg("texts"),
      "Returns (context index, score) pairs, best first.");

  m.def("hash_embed", [](const std::string& text, std::int64_t dim) { return hash_embed(text, dim).values; },
        py::arg("text"), py::arg("dim") = 64);

  m.def(
      "best_match",
      [](const std::string& need, const std::vector<std::string>& contexts, std::int64_t dim) {
        HashEmbedder embedder(dim);
        const auto ctx = as_sentences(contexts);
        const auto match = best_match({SentenceId{"need"}, need, SentenceSource::generated, 0}, ctx, embedder);
        return py::make_tuple(match.sentence.text, match.score);
      },
      py::arg("need"), py::arg("contexts"), py::arg("dim") = 64);

  m.def("procedural_image",
        [](const std::string& prompt, int height, int width, std::uint64_t seed) {
          return to_array(procedural_image(prompt, height, width, seed));
        },
        py::arg("prompt"), py::arg("height"), py::arg("width"), py::arg("seed"));

  m.def("to_grayscale", [](const U8Array& rgb) { return to_array(to_grayscale(rgb_from(rgb))); });

  m.def("dodge_sketch",
        [](const U8Array& gray, double sigma) { return to_array(dodge_sketch(gray_from(gray), SketchParams::with_sigma(sigma))); },
        py::arg("gray"), py::arg("sigma") = 3.0);

  m.def(
      "sketchify",
      [](const U8Array& rgb, double sigma) {
        MentalImage img;
        img.pixels = rgb_from(rgb);
        return to_array(sketchify(img, SketchParams::with_sigma(sigma)).pixels);
      },
      py::arg("rgb"), py::arg("sigma") = 3.0);

  m.def("gaussian_kernel", [](double sigma) { return gaussian_kernel(sigma, SketchParams{sigma}.kernel_radius()); });

  m.def("encode_pgm", [](const U8Array& gray) {
    const auto bytes = encode_pgm(gray_from(gray));
    return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  });

  m.def("build_prompt",
        [](const std::vector<std::string>& contexts, const std::string& need) {
          return build_prompt(as_sentences(contexts), Need{NeedId{"0"}, need, 0, NeedStatus::active}).text;
        },
        py::arg("contexts"), py::arg("need"));

  m.def("parse_actions", [](const std::string& raw, const std::string& delim) { return parse_actions(raw, delim); },
        py::arg("raw"), py::arg("delimiter") = " - ");

  m.def("template_generate", [](const std::string& prompt) { return template_generate(prompt, default_rules()); });

  m.def("format_ranking", [](const std::vector<std::string>& texts, const std::vector<double>& scores) {
    if (texts.size() != scores.size()) throw py::value_error("texts and scores differ in length");
    Ranking r;
    for (std::size_t i = 0; i < texts.size(); ++i) r.entries.push_back({SentenceId{std::to_string(i)}, scores[i]});
    std::stable_sort(r.entries.begin(), r.entries.end(),
                     [](const RankingEntry& a, const RankingEntry& b) { return a.score > b.score; });
    return format_ranking(r, as_sentences(texts));
  });

  m.def("validate_scenario", [](const std::filesystem::path& path) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& v : validate_scenario(load_scenario(path))) out.emplace_back(v.field, v.message);
    return out;
  });

  m.def(
      "run_scenario",
      [](const std::filesystem::path& path, std::optional<std::string> backend) {
        auto scenario = load_scenario(path);
        if (backend) {
          auto mode = parse_backend_mode(*backend);
          if (!mode) throw py::value_error("unknown backend " + *backend);
          scenario.backend.mode = *mode;
        }
        auto backends = make_backends(scenario.backend, scenario.rules);
        py::gil_scoped_release release;
        return dump_trace(run_loop(scenario, backends).trace);
      },
      py::arg("path"), py::arg("backend") = py::none(), "Runs the loop and returns the trace as JSON text.");

  m.def(
      "run_cli",
      [](const std::filesystem::path& scenario, const std::filesystem::path& out_dir, std::optional<std::string> backend) {
        CliOptions o;
        o.scenario_path = scenario;
        o.out_dir = out_dir;
        if (backend) o.backend = parse_backend_mode(*backend);
        std::ostringstream out, err;
        const int code = run(o, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("scenario"), py::arg("out_dir"), py::arg("backend") = py::none());
}
