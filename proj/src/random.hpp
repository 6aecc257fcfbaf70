#pragma once

#include <array>
#include <cstdint>
#include <random>

namespace asvgd {

using Rng = std::mt19937_64;

// Independent sub-streams of one master seed.
enum class SeedStream : std::uint32_t {
  kInit = 1,
  kTarget = 2,
  kReference = 3,
};

inline std::uint64_t derive_seed(std::uint64_t master, SeedStream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master & 0xffffffffu),
                    static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace asvgd
