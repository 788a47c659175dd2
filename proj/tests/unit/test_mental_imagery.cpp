#include <cmath>

#include "doctest.h"

#include "cogito/backend.hpp"
#include "cogito/error.hpp"
#include "cogito/mental_imagery.hpp"
#include "support.hpp"

using namespace cogito;

namespace {

// Direct 2-D evaluation of the pencil-sketch formula: explicit mirrored
// padding, a full (non-separable) Gaussian window, floating-point dodge.
GrayImage oracle_sketch(const GrayImage& gray, double sigma) {
  const int h = gray.height, w = gray.width;
  const int r = std::max(1, static_cast<int>(std::ceil(3 * sigma)));
  std::vector<double> taps;
  double total = 0;
  for (int k = -r; k <= r; ++k) {
    taps.push_back(std::exp(-(k * k) / (2 * sigma * sigma)));
    total += taps.back();
  }
  for (auto& t : taps) t /= total;

  auto mirror = [](int i, int n) {
    while (i < 0 || i >= n) i = i < 0 ? -i - 1 : 2 * n - 1 - i;
    return i;
  };

  GrayImage out(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          acc += taps[static_cast<std::size_t>(dy + r)] * taps[static_cast<std::size_t>(dx + r)] *
                 (255 - gray.at(mirror(y + dy, h), mirror(x + dx, w)));
        }
      }
      const double blur = std::floor(acc + 0.5);
      const double denom = std::max(1.0, 255.0 - blur);
      out.at(y, x) = static_cast<std::uint8_t>(std::min(255.0, std::floor(gray.at(y, x) * 255.0 / denom + 0.5)));
    }
  }
  return out;
}

MentalImage constant_image(int h, int w, std::uint8_t v) {
  MentalImage img;
  img.id = ImageId{"c"};
  img.pixels = RgbImage(h, w);
  std::fill(img.pixels.pixels.begin(), img.pixels.pixels.end(), v);
  return img;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a cogito::Error");
  return ErrorCode::PreconditionViolation;
}

}  // namespace

TEST_CASE("luma uses integer BT.601 weights") {
  CHECK(luma(255, 255, 255) == 255);
  CHECK(luma(0, 0, 0) == 0);
  CHECK(luma(255, 0, 0) == 76);   // 76.245
  CHECK(luma(0, 255, 0) == 150);  // 149.685
  CHECK(luma(0, 0, 255) == 29);   // 29.07
}

TEST_CASE("reflect_index mirrors with the edge repeated") {
  CHECK(reflect_index(-1, 5) == 0);
  CHECK(reflect_index(-2, 5) == 1);
  CHECK(reflect_index(5, 5) == 4);
  CHECK(reflect_index(6, 5) == 3);
  CHECK(reflect_index(-7, 1) == 0);
  CHECK(reflect_index(12, 3) == 0);  // 12 -> 11-12 ... folded twice
}

TEST_CASE("kernel sums to one") {
  for (double sigma : {0.1, 0.5, 1.0, 2.5, 3.0, 7.3}) {
    const SketchParams p{sigma};
    const auto taps = gaussian_kernel(sigma, p.kernel_radius());
    CHECK(taps.size() == static_cast<std::size_t>(2 * p.kernel_radius() + 1));
    double sum = 0;
    for (double t : taps) sum += t;
    CHECK(std::abs(sum - 1.0) <= 1e-9);
  }
  CHECK(SketchParams{0.1}.kernel_radius() == 1);
  CHECK(SketchParams{1.0}.kernel_radius() == 3);
  CHECK(SketchParams{3.0}.kernel_radius() == 9);
}

TEST_CASE("sketch of constant images") {
  const SketchParams p{3.0};
  for (int v : {1, 64, 128, 255}) {
    for (int size : {1, 2, 7, 64}) {
      const auto s = sketchify(constant_image(size, size, static_cast<std::uint8_t>(v)), p);
      CHECK(std::all_of(s.pixels.pixels.begin(), s.pixels.pixels.end(), [](auto x) { return x == 255; }));
    }
  }
  const auto zero = sketchify(constant_image(9, 4, 0), p);
  CHECK(std::all_of(zero.pixels.pixels.begin(), zero.pixels.pixels.end(), [](auto x) { return x == 0; }));
}

TEST_CASE("blur of a constant stays that constant") {
  testsupport::Gen gen(3);
  for (int i = 0; i < 20; ++i) {
    const auto v = static_cast<std::uint8_t>(gen.integer(0, 255));
    const GrayImage img(gen.integer(1, 20), gen.integer(1, 20), v);
    for (double b : gaussian_blur(img, SketchParams{gen.real(0.2, 4.0)})) CHECK(std::abs(b - v) <= 1e-6);
  }
}

TEST_CASE("1x6 two-level row at sigma 1") {
  GrayImage row(1, 6);
  row.pixels = {100, 100, 100, 200, 200, 200};
  const auto out = dodge_sketch(row, SketchParams{1.0});
  // frozen from the direct 2-D evaluation
  CHECK(out.pixels == std::vector<std::uint8_t>{255, 241, 196, 255, 255, 255});
  CHECK(out == oracle_sketch(row, 1.0));
  CHECK(out.pixels.front() == 255);
  CHECK(out.pixels.back() == 255);
  CHECK(out.pixels[2] < 255);
}

TEST_CASE("property: separable sketch equals the 2-D oracle") {
  testsupport::Gen gen(11);
  for (int i = 0; i < 60; ++i) {
    GrayImage img(gen.integer(1, 24), gen.integer(1, 24));
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(gen.integer(0, 255));
    const double sigma = gen.real(0.3, 3.0);
    const auto fast = dodge_sketch(img, SketchParams{sigma});
    const auto slow = oracle_sketch(img, sigma);
    REQUIRE(fast.height == img.height);
    REQUIRE(fast.width == img.width);
    // the two summation orders may land on opposite sides of a .5 boundary
    int off = 0;
    for (std::size_t k = 0; k < fast.pixels.size(); ++k) {
      const int d = std::abs(fast.pixels[k] - slow.pixels[k]);
      CHECK(d <= 1);
      off += d != 0;
    }
    CHECK(off * 100 <= static_cast<int>(fast.pixels.size()));
    CHECK(fast == dodge_sketch(img, SketchParams{sigma}));
  }
}

TEST_CASE("sketchify validates sigma and keeps the source id") {
  const auto img = constant_image(3, 3, 10);
  CHECK(code_of([&] { sketchify(img, SketchParams{0.0}); }) == ErrorCode::PreconditionViolation);
  CHECK(code_of([&] { SketchParams::with_sigma(-1); }) == ErrorCode::PreconditionViolation);
  CHECK(code_of([&] { SketchParams::with_sigma(std::nan("")); }) == ErrorCode::PreconditionViolation);
  const auto s = sketchify(img, SketchParams{1.5});
  CHECK(s.source_id == img.id);
  CHECK(s.sigma == 1.5);
}

TEST_CASE("generate_mental_image is deterministic per seed") {
  ProceduralImageGenerator backend;
  IdGenerator ids;
  const auto stim = Stimulus{StimulusKind::description, "a man takes the keys which are on the desk", 0};
  const auto a = generate_mental_image(stim, backend, 64, 64, 7, ids);
  const auto b = generate_mental_image(stim, backend, 64, 64, 7, ids);
  const auto c = generate_mental_image(stim, backend, 64, 64, 8, ids);
  CHECK(a.pixels == b.pixels);
  CHECK(a.id != b.id);
  CHECK(a.pixels.pixels != c.pixels.pixels);
  CHECK(a.descriptor.text == stim.text);
  CHECK(code_of([&] { generate_mental_image(stim, backend, 4, 4, 7, ids); }) == ErrorCode::PreconditionViolation);
}

TEST_CASE("generate_sequence orders steps and seeds") {
  ProceduralImageGenerator backend;
  IdGenerator ids;
  const std::vector<std::string> plan{"a man takes the keys which are on the desk", "the man goes towards the door",
                                      "the man opens the door"};
  std::vector<MentalImage> frames;
  for (const auto& step : plan) {
    const Sentence s{SentenceId{"s"}, step, SentenceSource::generated, 0};
    auto one = generate_sequence(s, 1, backend, 32, 32, 5, ids);
    REQUIRE(one.size() == 1);
    CHECK(one[0].prompt.find(step) != std::string::npos);
    frames.push_back(one[0]);
  }
  CHECK(frames.size() == 3);

  const Sentence event{SentenceId{"e"}, "the man opens the door", SentenceSource::generated, 0};
  for (int n = 1; n <= kMaxSequenceSteps; ++n) {
    const auto seq = generate_sequence(event, n, backend, 8, 8, 100, ids);
    REQUIRE(seq.size() == static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      CHECK(seq[static_cast<std::size_t>(i)].prompt ==
            "the man opens the door, step " + std::to_string(i + 1) + " of " + std::to_string(n));
      CHECK(seq[static_cast<std::size_t>(i)].seed == 100u + static_cast<unsigned>(i));
    }
  }
  CHECK(code_of([&] { generate_sequence(event, 17, backend, 8, 8, 0, ids); }) == ErrorCode::PreconditionViolation);
  CHECK(code_of([&] { generate_sequence(event, 0, backend, 8, 8, 0, ids); }) == ErrorCode::PreconditionViolation);
}

TEST_CASE("sequence failures name the step") {
  class FailsOnThird : public ImageGenerator {
   public:
    RgbImage generate(const std::string& prompt, int h, int w, std::uint64_t seed) override {
      if (++calls_ == 3) throw BackendFailure(ErrorCode::BackendError, "server said no", 503);
      return procedural_image(prompt, h, w, seed);
    }

   private:
    int calls_ = 0;
  } backend;
  IdGenerator ids;
  const Sentence event{SentenceId{"e"}, "the man opens the door", SentenceSource::generated, 0};
  try {
    generate_sequence(event, 5, backend, 8, 8, 0, ids);
    FAIL("expected a failure");
  } catch (const BackendFailure& e) {
    CHECK(e.code() == ErrorCode::BackendError);
    CHECK(e.status() == 503);
    CHECK(std::string(e.what()).find("step 2") != std::string::npos);
  }
}

TEST_CASE("revise_image builds a new image from both clauses") {
  ProceduralImageGenerator backend;
  IdGenerator ids;
  const auto base = generate_mental_image({StimulusKind::description, "the man opens the door", 0}, backend, 32, 32,
                                          1, ids);
  const auto copy = base;
  const Sentence knowledge{SentenceId{"k"}, "the person is nervous", SentenceSource::generated, 1};
  const auto revised = revise_image(base, knowledge, backend, 2, ids);
  CHECK(revised.id != base.id);
  CHECK(revised.prompt == "the man opens the door, the person is nervous");
  CHECK(base == copy);
  CHECK(revised.pixels == revise_image(base, knowledge, backend, 2, ids).pixels);
  const Sentence empty{SentenceId{"k"}, "  ", SentenceSource::generated, 1};
  CHECK(code_of([&] { revise_image(base, empty, backend, 2, ids); }) == ErrorCode::PreconditionViolation);
}
