#pragma once

// Seeded random streams. The engine is Boost's mt19937_64 with Boost's own
// distributions, whose algorithms are fixed by the library rather than by
// the standard library vendor, so a (seed, stream) pair replays the same
// samples on every platform.

#include <cstdint>
#include <string_view>

#include <boost/random/mersenne_twister.hpp>

namespace wpd {

inline constexpr std::string_view kRngAlgo = "mt19937_64+splitmix64/boost-1.74";

/// splitmix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for sub-stream `stream` of master seed `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

class RngStream {
 public:
  using engine_type = boost::random::mt19937_64;

  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_(stream_id), engine_(derive_seed(seed, stream_id)) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }
  engine_type& engine() { return engine_; }

  /// Independent child stream; does not advance this one.
  RngStream child(std::uint64_t index) const {
    return RngStream(derive_seed(seed_, stream_), index);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  engine_type engine_;
};

}  // namespace wpd
