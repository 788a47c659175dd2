#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cogito/model.hpp"

namespace cogito {

// Binary PGM: "P5\n{W} {H}\n255\n" then H*W bytes, row-major.
std::vector<std::uint8_t> encode_pgm(const GrayImage& image);
// Binary PPM: "P6\n{W} {H}\n255\n" then H*W*3 bytes.
std::vector<std::uint8_t> encode_ppm(const RgbImage& image);

// Return the number of bytes written. Throw IoError.
std::size_t write_pgm(const GrayImage& image, const std::filesystem::path& path);
std::size_t write_ppm(const RgbImage& image, const std::filesystem::path& path);

// Throws FileNotFound or ParseError.
GrayImage read_pgm(const std::filesystem::path& path);
RgbImage read_ppm(const std::filesystem::path& path);

// PNG bytes -> 8-bit RGB. Throws MalformedResponse.
RgbImage decode_png(std::span<const std::uint8_t> bytes);

std::string base64_encode(std::span<const std::uint8_t> bytes);
// Throws MalformedResponse on invalid input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace cogito
