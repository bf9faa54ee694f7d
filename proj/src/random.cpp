#include "acmde/random.hpp"

#include <stdexcept>

namespace acmde {

namespace {
constexpr double kTwoPowMinus53 = 1.0 / 9007199254740992.0;
}

double Mt64Source::uniform() {
  return static_cast<double>(engine_() >> 11) * kTwoPowMinus53;
}

double Mt64Source::uniform_open() {
  // (k + 0.5) / 2^53 never hits either endpoint.
  return (static_cast<double>(engine_() >> 11) + 0.5) * kTwoPowMinus53;
}

std::size_t Mt64Source::index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("index: empty range");
  const std::uint64_t range = n;
  // Rejection keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % range);
  std::uint64_t v = engine_();
  while (v >= limit) v = engine_();
  return static_cast<std::size_t>(v % range);
}

double Mt64Source::normal(double mean, double stddev) {
  return mean + stddev * gauss_(engine_);
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stable_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace acmde
