#ifndef GSG_RNG_HPP
#define GSG_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace gsg {

// Counter-based splittable generator. A (seed, stream) pair keys an
// independent sequence; word(k) is a pure function of the key and the
// counter k, so any element of any stream can be produced without state.
// The mixing function is the SplitMix64 finalizer (Steele/Lea/Flood 2014,
// Vigna's fixed-increment variant), applied to key + k*golden.
class CounterRng {
 public:
  CounterRng() = default;
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(derive_key(seed, stream)) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream) {
    // two mixing rounds decorrelate (seed, stream) pairs
    return mix(mix(seed + 0x9E3779B97F4A7C15ULL) ^
               mix(stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
  }

  std::uint64_t word(std::uint64_t counter) const {
    return mix(key_ + counter * 0x9E3779B97F4A7C15ULL);
  }

  std::uint64_t next_u64() { return word(counter_++); }

  // uniform on (0,1), never exactly 0 or 1
  double next_double() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // standard normal via Box-Muller (two words per draw, cosine branch)
  double next_normal() {
    double u1 = next_double();
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  std::vector<double> normals(std::size_t n) {
    std::vector<double> out(n);
    for (auto& x : out) x = next_normal();
    return out;
  }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

// Stream-id layout used across the MC engine. Each disorder sample index
// gets its own family of streams so parallel workers never share state.
namespace streams {
inline constexpr std::uint64_t kDisorder = 0;
inline constexpr std::uint64_t kDisorderB = 1;    // second system (J')
inline constexpr std::uint64_t kDisorderC = 2;    // third system (J'')
inline constexpr std::uint64_t kCavity = 3;       // one-body fields J'_i
inline constexpr std::uint64_t kReplicaA = 4;     // direction stream, replica 1
inline constexpr std::uint64_t kReplicaB = 5;     // direction stream, replica 2
inline constexpr std::uint64_t kDirectionsB = 6;  // directions, second system
inline constexpr std::uint64_t kDirectionsC = 7;  // directions, third system

inline std::uint64_t per_sample(std::uint64_t kind, std::uint64_t sample_index) {
  return kind + 8 * (sample_index + 1);
}
}  // namespace streams

}  // namespace gsg

#endif
