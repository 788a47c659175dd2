#pragma once
// Mental imagery: stimulus -> generated image -> pencil sketch.
//
// The sketch filter is a colour dodge of the grayscale image by a blurred
// copy of its inverse:
//   gray = round(0.299 R + 0.587 G + 0.114 B)
//   inv  = 255 - gray
//   blur = round(Gaussian(inv; sigma, radius = ceil(3 sigma)))   reflect padding
//   out  = min(255, round(gray * 255 / max(1, 255 - blur)))
// Flat regions map to white, tonal edges to dark strokes.

#include <cstdint>
#include <vector>

#include "cogito/model.hpp"

namespace cogito {

class ImageGenerator;

struct SketchParams {
  double sigma = 3.0;

  // Throws PreconditionViolation unless sigma > 0 and finite.
  static SketchParams with_sigma(double sigma);
  int kernel_radius() const;
};

inline constexpr int kLumaR = 299;
inline constexpr int kLumaG = 587;
inline constexpr int kLumaB = 114;
inline constexpr int kMaxSequenceSteps = 16;
inline constexpr int kMinGeneratedSide = 8;

// Normalized 1-D Gaussian taps, length 2 * radius + 1.
std::vector<double> gaussian_kernel(double sigma, int radius);

// Index into [0, n) under half-sample symmetric reflection, folded as many
// times as needed.
int reflect_index(int i, int n);

std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b);
GrayImage to_grayscale(const RgbImage& image);

// Separable Gaussian blur with double accumulation, before rounding.
std::vector<double> gaussian_blur(const GrayImage& image, const SketchParams& params);

// Colour dodge on an already-grayscale image.
GrayImage dodge_sketch(const GrayImage& gray, const SketchParams& params);

SketchImage sketchify(const MentalImage& image, const SketchParams& params);

// Renders the stimulus text. Throws PreconditionViolation when a side is
// below 8; backend errors propagate.
MentalImage generate_mental_image(const Stimulus& stimulus, ImageGenerator& backend, int height, int width,
                                  std::uint64_t seed, IdGenerator& ids);

// Step i (0-based) uses prompt "{event}, step {i+1} of {n}" and seed + i.
// Throws PreconditionViolation unless 1 <= n_steps <= 16; a backend error is
// rethrown with the failing step index in its message.
std::vector<MentalImage> generate_sequence(const Sentence& event, int n_steps, ImageGenerator& backend, int height,
                                           int width, std::uint64_t seed, IdGenerator& ids);

// Regenerates with prompt "{original prompt}, {new knowledge}" under a fresh
// id; the original image is left untouched.
MentalImage revise_image(const MentalImage& image, const Sentence& new_knowledge, ImageGenerator& backend,
                         std::uint64_t seed, IdGenerator& ids);

}  // namespace cogito
