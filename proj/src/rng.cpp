#include "flashsim/rng.hpp"

#include <cmath>

namespace flashsim {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace

std::uint64_t mix_seed(std::uint64_t seed) { return splitmix64(seed); }

std::uint64_t hash_tag(std::string_view tag) {
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

RandomStream::RandomStream(std::uint64_t seed)
    : root_(seed), engine_(mix_seed(seed)) {}

RandomStream RandomStream::derive(std::string_view tag) const {
  return RandomStream(splitmix64(root_ ^ hash_tag(tag)));
}

RandomStream RandomStream::derive(std::string_view tag, std::uint64_t index) const {
  return RandomStream(splitmix64(splitmix64(root_ ^ hash_tag(tag)) + index));
}

std::uint64_t RandomStream::bits() { return engine_(); }

double RandomStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::gaussian() {
  double u1 = uniform();
  double u2 = uniform();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double RandomStream::gaussian(double mean, double sigma) {
  return mean + sigma * gaussian();
}

bool RandomStream::coin() { return (engine_() & 1u) != 0; }

}  // namespace flashsim
