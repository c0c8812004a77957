#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace mcs {

// Seeded generator with named, reproducible sub-streams. A sub-stream seed
// depends only on the parent seed and the path of names/indices, never on
// how many draws the parent has made.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed = 0);

  std::uint64_t seed() const { return seed_; }
  SeededRng substream(std::string_view name) const;
  SeededRng substream(std::uint64_t index) const;

  std::mt19937_64& engine() { return engine_; }

  double uniform01();
  double uniform(double lo, double hi);
  int uniform_int(int lo, int hi);  // inclusive
  bool bernoulli(double p);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);
std::uint64_t hash_name(std::string_view name);

}  // namespace mcs
