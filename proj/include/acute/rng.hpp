#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace acute {

using Rng = std::mt19937_64;

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from a master seed and a structural key
// (trial, level, beam slot, node, ...). Streams depend only on the key, never
// on scheduling order.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> key) {
  std::uint64_t h = mix64(master);
  for (std::uint64_t k : key) h = mix64(h ^ mix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

inline Rng make_rng(std::uint64_t master,
                    std::initializer_list<std::uint64_t> key) {
  return Rng(derive_seed(master, key));
}

}  // namespace acute
