#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace gdd {

// xorshift64* (Vigna 2016): shifts 12/25/27, multiplier 0x2545F4914F6CDD1D.
// The 64-bit seed is expanded through one splitmix64 step so that seed 0 is
// usable and nearby seeds give unrelated streams.
class Xorshift64Star {
public:
  explicit Xorshift64Star(std::uint64_t seed)
  {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    state_ = z ^ (z >> 31);
    if (state_ == 0)
      state_ = 0x9E3779B97F4A7C15ull;
  }

  std::uint64_t next()
  {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1Dull;
  }

  // Uniform on (0, 1]: top 53 bits plus one, scaled by 2^-53.
  double uniform()
  {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller, cosine branch only (two uniforms per draw).
  double normal()
  {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  // Uniform integer in [0, bound) by multiply-shift.
  std::uint64_t below(std::uint64_t bound)
  {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

private:
  std::uint64_t state_;
};

}
