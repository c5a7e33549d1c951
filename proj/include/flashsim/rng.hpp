#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace flashsim {

std::uint64_t mix_seed(std::uint64_t seed);
std::uint64_t hash_tag(std::string_view tag);

/// Deterministic random stream. All randomness in the simulator flows from
/// explicitly seeded streams; there is no global RNG state. Substreams are
/// derived from a root seed and a purpose tag so that independent parts of
/// an experiment do not share generator state.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  RandomStream derive(std::string_view tag) const;
  RandomStream derive(std::string_view tag, std::uint64_t index) const;

  std::uint64_t bits();
  double uniform();  // [0, 1)
  // Box-Muller without pair caching, so the draw sequence is a pure
  // function of the call order.
  double gaussian();
  double gaussian(double mean, double sigma);
  bool coin();

  std::uint64_t root_seed() const { return root_; }

 private:
  std::uint64_t root_;
  std::mt19937_64 engine_;
};

}  // namespace flashsim
