#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace glauber {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seedable random stream with deterministic substream splitting.
//
// A stream is identified by (seed, stream_id); substream(k) derives a new,
// statistically independent stream from the identifiers alone, not from the
// current draw position.  Replica r of a simulation uses substream(r), so
// results are reproducible for a fixed seed regardless of how replicas are
// scheduled across threads.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_(stream_id), engine_(derive_key(seed, stream_id)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1); 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Exponential with the given rate; strictly positive.
  double exponential(double rate) {
    return -std::log1p(-uniform()) / rate;
  }

  // Uniform integer in [0, bound); bound > 0.
  int uniform_int(int bound) {
    const auto wide = static_cast<unsigned __int128>(next_u64()) *
                      static_cast<unsigned __int128>(bound);
    return static_cast<int>(wide >> 64);
  }

  bool coin() { return (next_u64() >> 63) != 0; }

  std::int8_t random_sign() { return coin() ? std::int8_t{1} : std::int8_t{-1}; }

  // Independent stream derived from identifiers only.
  RngStream substream(std::uint64_t id) const {
    return RngStream(seed_, splitmix64(stream_ ^ splitmix64(id + 1)));
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

  // For <random> distributions (binomial resampling etc.).
  std::mt19937_64& engine() { return engine_; }

 private:
  static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream_id) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream_id * 0x632be59bd9b4e019ULL + 1));
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

}  // namespace glauber
