#pragma once
// Small helpers shared by the unit tests: seeded generators and temp dirs.

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "cogito/model.hpp"
#include "cogito/semantic_matcher.hpp"

namespace testsupport {

inline std::filesystem::path data_dir() { return COGITO_TEST_DATA; }

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("cogito_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  std::string word() {
    static const char* kWords[] = {"keys", "door", "table", "laptop", "water", "bottle", "chair", "desk",
                                   "red",  "box",  "mouse", "pad",    "seat",  "metal",  "paper", "pile"};
    return kWords[integer(0, 15)];
  }

  std::string sentence(int min_words = 2, int max_words = 8) {
    std::string s;
    const int n = integer(min_words, max_words);
    for (int i = 0; i < n; ++i) {
      if (i) s += ' ';
      s += word();
    }
    return s + " " + std::to_string(integer(0, 1'000'000));
  }

  cogito::EmbeddingVector vector(int dim) {
    std::vector<double> v(static_cast<std::size_t>(dim));
    double norm = 0.0;
    do {
      norm = 0.0;
      for (auto& x : v) {
        x = real(-10.0, 10.0);
        norm += x * x;
      }
    } while (norm == 0.0);
    return cogito::EmbeddingVector(std::move(v));
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// A loopback port with nothing listening on it.
inline int free_port() {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  ::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  ::close(fd);
  return ntohs(addr.sin_port);
}

}  // namespace testsupport
