#include "cogito/image_io.hpp"

#include <openssl/evp.h>
#include <png.h>

#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "cogito/error.hpp"

namespace cogito {
namespace {

std::vector<std::uint8_t> with_header(char magic, int width, int height, std::span<const std::uint8_t> data) {
  const std::string header = std::string("P") + magic + "\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), data.begin(), data.end());
  return out;
}

// Parses a binary netpbm header ("P5"/"P6"), returning the offset of the
// first data byte. Comments are not supported.
std::size_t parse_netpbm_header(const std::vector<std::uint8_t>& bytes, char magic, int& width, int& height,
                                const std::string& where) {
  std::size_t pos = 0;
  auto fail = [&](const std::string& what) { throw Error(ErrorCode::ParseError, where + ": " + what); };
  auto skip_space = [&] {
    while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
  };
  auto read_int = [&]() -> int {
    skip_space();
    if (pos >= bytes.size() || !std::isdigit(bytes[pos])) fail("expected integer");
    long value = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      value = value * 10 + (bytes[pos++] - '0');
      if (value > 1 << 24) fail("dimension too large");
    }
    return static_cast<int>(value);
  };
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != static_cast<std::uint8_t>(magic)) {
    fail(std::string("expected P") + magic + " magic");
  }
  pos = 2;
  width = read_int();
  height = read_int();
  if (read_int() != 255) fail("only maxval 255 is supported");
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) fail("missing separator after maxval");
  ++pos;
  if (width < 1 || height < 1) fail("empty image");
  return pos;
}

}  // namespace

std::vector<std::uint8_t> encode_pgm(const GrayImage& image) {
  if (image.height < 1 || image.width < 1 || image.pixels.size() != static_cast<std::size_t>(image.height) * image.width) {
    throw Error(ErrorCode::PreconditionViolation, "pgm: pixel buffer does not match dimensions");
  }
  return with_header('5', image.width, image.height, image.pixels);
}

std::vector<std::uint8_t> encode_ppm(const RgbImage& image) {
  if (image.height < 1 || image.width < 1 ||
      image.pixels.size() != static_cast<std::size_t>(image.height) * image.width * 3) {
    throw Error(ErrorCode::PreconditionViolation, "ppm: pixel buffer does not match dimensions");
  }
  return with_header('6', image.width, image.height, image.pixels);
}

std::size_t write_pgm(const GrayImage& image, const std::filesystem::path& path) {
  const auto bytes = encode_pgm(image);
  write_file_bytes(path, bytes);
  return bytes.size();
}

std::size_t write_ppm(const RgbImage& image, const std::filesystem::path& path) {
  const auto bytes = encode_ppm(image);
  write_file_bytes(path, bytes);
  return bytes.size();
}

GrayImage read_pgm(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  int w = 0, h = 0;
  const auto offset = parse_netpbm_header(bytes, '5', w, h, path.string());
  if (bytes.size() - offset != static_cast<std::size_t>(w) * h) {
    throw Error(ErrorCode::ParseError, path.string() + ": pixel data size mismatch");
  }
  GrayImage image(h, w);
  std::memcpy(image.pixels.data(), bytes.data() + offset, image.pixels.size());
  return image;
}

RgbImage read_ppm(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  int w = 0, h = 0;
  const auto offset = parse_netpbm_header(bytes, '6', w, h, path.string());
  if (bytes.size() - offset != static_cast<std::size_t>(w) * h * 3) {
    throw Error(ErrorCode::ParseError, path.string() + ": pixel data size mismatch");
  }
  RgbImage image(h, w);
  std::memcpy(image.pixels.data(), bytes.data() + offset, image.pixels.size());
  return image;
}

RgbImage decode_png(std::span<const std::uint8_t> bytes) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    throw Error(ErrorCode::MalformedResponse, std::string("png: ") + img.message);
  }
  img.format = PNG_FORMAT_RGB;
  RgbImage out(static_cast<int>(img.height), static_cast<int>(img.width));
  if (!png_image_finish_read(&img, nullptr, out.pixels.data(), 0, nullptr)) {
    std::string message = img.message;
    png_image_free(&img);
    throw Error(ErrorCode::MalformedResponse, "png: " + message);
  }
  return out;
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(), static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  std::string clean;
  clean.reserve(text.size());
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) clean.push_back(c);
  }
  if (clean.size() % 4 != 0) throw Error(ErrorCode::MalformedResponse, "base64 length is not a multiple of 4");
  if (clean.empty()) return {};

  std::vector<std::uint8_t> out(clean.size() / 4 * 3);
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(clean.data()),
                                static_cast<int>(clean.size()));
  if (n < 0) throw Error(ErrorCode::MalformedResponse, "invalid base64");
  // EVP_DecodeBlock keeps the zero bytes produced by '=' padding
  std::size_t padding = 0;
  if (clean.back() == '=') ++padding;
  if (clean.size() >= 2 && clean[clean.size() - 2] == '=') ++padding;
  out.resize(static_cast<std::size_t>(n) - padding);
  return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace cogito
