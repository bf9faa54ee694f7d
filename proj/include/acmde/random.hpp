#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace acmde {

/// Source of every random draw an optimizer makes.
///
/// Operators never own an engine; they pull draws from a RandomSource so a
/// run can be replayed draw-for-draw (tests substitute a scripted source).
class RandomSource {
 public:
  virtual ~RandomSource() = default;

  /// Uniform on [0, 1).
  virtual double uniform() = 0;
  /// Uniform on the open interval (0, 1).
  virtual double uniform_open() = 0;
  /// Uniform integer in [0, n). Requires n > 0.
  virtual std::size_t index(std::size_t n) = 0;
  /// Gaussian draw.
  virtual double normal(double mean, double stddev) = 0;
};

/// Mersenne-twister backed stream. The uniform and index draws are computed
/// from raw engine output so sequences are identical across standard
/// libraries; normal() uses std::normal_distribution.
class Mt64Source final : public RandomSource {
 public:
  explicit Mt64Source(std::uint64_t seed) : engine_(seed) {}

  double uniform() override;
  double uniform_open() override;
  std::size_t index(std::size_t n) override;
  double normal(double mean, double stddev) override;

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> gauss_{0.0, 1.0};
};

/// SplitMix64 finalizer; used to derive independent per-run seeds.
std::uint64_t mix64(std::uint64_t x);

/// FNV-1a over a string, stable across platforms.
std::uint64_t stable_hash(std::string_view text);

}  // namespace acmde
