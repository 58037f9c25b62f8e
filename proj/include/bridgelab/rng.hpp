#pragma once

#include <cstdint>
#include <random>

namespace bridgelab::rng {

// All randomness flows through substreams derived from one master seed with
// the 64-bit finalizer below (the SplitMix64 constants). The derivation is a
// pure hash chain, so any substream can be reconstructed independently of
// execution order; this is what makes worker-count-independent output cheap.
inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// Folds one more key part into a stream key. Chain calls to build keys from
// (study, schedule point, trial, role) tuples.
constexpr std::uint64_t fold(std::uint64_t key, std::uint64_t part) {
  return mix64(key ^ (part + kGamma));
}

// Final substream seed for a (master seed, stream key) pair.
constexpr std::uint64_t derive(std::uint64_t master, std::uint64_t key) {
  return mix64(master + kGamma * (key + 1));
}

inline std::mt19937_64 engine(std::uint64_t master, std::uint64_t key) {
  return std::mt19937_64(derive(master, key));
}

}  // namespace bridgelab::rng
