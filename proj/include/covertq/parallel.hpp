#pragma once

// Thread control and reproducible random streams shared by the OpenMP kernels.

#include <cstdint>
#include <random>

namespace covertq::parallel {

/// Number of worker threads the kernels will use. Honors COVERTQ_THREADS
/// (a positive integer cap) on first call.
int max_threads();

/// Overrides the thread cap (n <= 0 restores the environment/default value).
void set_max_threads(int n);

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent generator for work chunk `stream` of a run seeded with `seed`.
inline std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL)));
}

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Samples per independent random stream. Results depend on the seed and the
/// sample count only, never on the thread count.
inline constexpr std::uint64_t kChunkSize = 2048;

}  // namespace covertq::parallel
