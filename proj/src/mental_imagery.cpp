#include "cogito/mental_imagery.hpp"

#include <algorithm>
#include <cmath>

#include "cogito/backend.hpp"
#include "cogito/error.hpp"

namespace cogito {
namespace {

std::uint8_t round_to_byte(double v) {
  const double r = std::floor(v + 0.5);
  return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

void check_generated_size(int height, int width) {
  if (height < kMinGeneratedSide || width < kMinGeneratedSide) {
    throw Error(ErrorCode::PreconditionViolation, "image size must be at least 8x8, got " + std::to_string(height) +
                                                      "x" + std::to_string(width));
  }
}

RgbImage render(ImageGenerator& backend, const std::string& prompt, int height, int width, std::uint64_t seed) {
  RgbImage pixels = backend.generate(prompt, height, width, seed);
  if (pixels.height != height || pixels.width != width ||
      pixels.pixels.size() != static_cast<std::size_t>(height) * width * 3) {
    throw Error(ErrorCode::MalformedResponse, "image backend returned " + std::to_string(pixels.height) + "x" +
                                                  std::to_string(pixels.width) + ", expected " +
                                                  std::to_string(height) + "x" + std::to_string(width));
  }
  return pixels;
}

}  // namespace

SketchParams SketchParams::with_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::PreconditionViolation, "sigma must be finite and > 0");
  }
  return SketchParams{sigma};
}

int SketchParams::kernel_radius() const { return std::max(1, static_cast<int>(std::ceil(3.0 * sigma))); }

std::vector<double> gaussian_kernel(double sigma, int radius) {
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double w = std::exp(-(static_cast<double>(k) * k) / (2.0 * sigma * sigma));
    taps[static_cast<std::size_t>(k + radius)] = w;
    sum += w;
  }
  for (double& w : taps) w /= sum;
  return taps;
}

int reflect_index(int i, int n) {
  const int period = 2 * n;
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return static_cast<std::uint8_t>((kLumaR * r + kLumaG * g + kLumaB * b + 500) / 1000);
}

GrayImage to_grayscale(const RgbImage& image) {
  GrayImage gray(image.height, image.width);
  for (int r = 0; r < image.height; ++r) {
    for (int c = 0; c < image.width; ++c) gray.at(r, c) = luma(image.at(r, c, 0), image.at(r, c, 1), image.at(r, c, 2));
  }
  return gray;
}

std::vector<double> gaussian_blur(const GrayImage& image, const SketchParams& params) {
  const int h = image.height, w = image.width;
  const int radius = params.kernel_radius();
  const auto taps = gaussian_kernel(params.sigma, radius);

  std::vector<double> horizontal(static_cast<std::size_t>(h) * w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += taps[static_cast<std::size_t>(k + radius)] * image.at(r, reflect_index(c + k, w));
      }
      horizontal[static_cast<std::size_t>(r) * w + c] = acc;
    }
  }

  std::vector<double> out(horizontal.size());
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += taps[static_cast<std::size_t>(k + radius)] *
               horizontal[static_cast<std::size_t>(reflect_index(r + k, h)) * w + c];
      }
      out[static_cast<std::size_t>(r) * w + c] = acc;
    }
  }
  return out;
}

GrayImage dodge_sketch(const GrayImage& gray, const SketchParams& params) {
  if (gray.height < 1 || gray.width < 1 || gray.pixels.size() != static_cast<std::size_t>(gray.height) * gray.width) {
    throw Error(ErrorCode::PreconditionViolation, "sketch input must be a non-empty image");
  }
  GrayImage inverted(gray.height, gray.width);
  std::transform(gray.pixels.begin(), gray.pixels.end(), inverted.pixels.begin(),
                 [](std::uint8_t v) { return static_cast<std::uint8_t>(255 - v); });

  const auto blurred = gaussian_blur(inverted, params);

  GrayImage out(gray.height, gray.width);
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    const int g = gray.pixels[i];
    const int blur = round_to_byte(blurred[i]);
    const int denom = std::max(1, 255 - blur);
    // round-half-up of g * 255 / denom in integers
    const int value = (2 * g * 255 + denom) / (2 * denom);
    out.pixels[i] = static_cast<std::uint8_t>(std::min(255, value));
  }
  return out;
}

SketchImage sketchify(const MentalImage& image, const SketchParams& params) {
  const auto& px = image.pixels;
  if (px.height < 1 || px.width < 1 || px.pixels.size() != static_cast<std::size_t>(px.height) * px.width * 3) {
    throw Error(ErrorCode::PreconditionViolation, "mental image has inconsistent dimensions");
  }
  const auto checked = SketchParams::with_sigma(params.sigma);
  return SketchImage{image.id, dodge_sketch(to_grayscale(px), checked), checked.sigma};
}

MentalImage generate_mental_image(const Stimulus& stimulus, ImageGenerator& backend, int height, int width,
                                  std::uint64_t seed, IdGenerator& ids) {
  check_generated_size(height, width);
  const std::string text = trim(stimulus.text);
  if (text.empty()) throw Error(ErrorCode::PreconditionViolation, "stimulus text is empty");

  MentalImage image;
  image.id = ids.next<ImageId>();
  image.prompt = text;
  image.seed = seed;
  image.pixels = render(backend, image.prompt, height, width, seed);
  image.descriptor = Sentence{ids.next<SentenceId>(), text, SentenceSource::generated, stimulus.origin_cycle};
  return image;
}

std::vector<MentalImage> generate_sequence(const Sentence& event, int n_steps, ImageGenerator& backend, int height,
                                           int width, std::uint64_t seed, IdGenerator& ids) {
  if (n_steps < 1 || n_steps > kMaxSequenceSteps) {
    throw Error(ErrorCode::PreconditionViolation, "n_steps must be within [1, 16], got " + std::to_string(n_steps));
  }
  check_generated_size(height, width);
  if (trim(event.text).empty()) throw Error(ErrorCode::PreconditionViolation, "event text is empty");

  std::vector<MentalImage> steps;
  steps.reserve(static_cast<std::size_t>(n_steps));
  for (int i = 0; i < n_steps; ++i) {
    const std::string prompt =
        trim(event.text) + ", step " + std::to_string(i + 1) + " of " + std::to_string(n_steps);
    try {
      MentalImage image;
      image.id = ids.next<ImageId>();
      image.prompt = prompt;
      image.seed = seed + static_cast<std::uint64_t>(i);
      image.pixels = render(backend, prompt, height, width, image.seed);
      image.descriptor = Sentence{ids.next<SentenceId>(), prompt, SentenceSource::generated, event.timestamp};
      steps.push_back(std::move(image));
    } catch (const BackendFailure& e) {
      throw BackendFailure(e.code(), "sequence step " + std::to_string(i) + ": " + e.what(), e.status());
    } catch (const Error& e) {
      throw Error(e.code(), "sequence step " + std::to_string(i) + ": " + e.what());
    }
  }
  return steps;
}

MentalImage revise_image(const MentalImage& image, const Sentence& new_knowledge, ImageGenerator& backend,
                         std::uint64_t seed, IdGenerator& ids) {
  const std::string addition = trim(new_knowledge.text);
  if (addition.empty()) throw Error(ErrorCode::PreconditionViolation, "new knowledge is empty");

  MentalImage revised;
  revised.id = ids.next<ImageId>();
  revised.prompt = image.prompt + ", " + addition;
  revised.seed = seed;
  revised.pixels = render(backend, revised.prompt, image.pixels.height, image.pixels.width, seed);
  revised.descriptor = Sentence{ids.next<SentenceId>(), revised.prompt, SentenceSource::generated,
                                new_knowledge.timestamp};
  return revised;
}

}  // namespace cogito
