#pragma once

#include <cmath>
#include <cstdint>

namespace levyif {

// All randomness in the library flows through this header so that runs are
// bit-reproducible across platforms and compilers. The standard library
// distributions are implementation-defined and must not be used.

inline std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Stream purposes. A simulation derives one stream per (purpose, neuron);
// replicas derive one sub-master seed per replica index. Keeping purposes on
// separate streams is what makes the coupled runs of the dominance check
// consume identical noise regardless of how many spikes each run produces.
namespace stream_tag {
inline constexpr std::uint64_t kReplica = 1;
inline constexpr std::uint64_t kNoise = 2;
inline constexpr std::uint64_t kBridge = 3;
inline constexpr std::uint64_t kSignal = 4;
inline constexpr std::uint64_t kInit = 5;
}  // namespace stream_tag

/// Documented derivation: two chained splitmix64 absorptions of (tag, index).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag,
                                 std::uint64_t index) noexcept {
  std::uint64_t s = master ^ (0x9E3779B97F4A7C15ULL * (tag + 1));
  std::uint64_t x = splitmix64_next(s);
  s = x ^ (0xBF58476D1CE4E5B9ULL * (index + 1));
  return splitmix64_next(s);
}

/// Seed for replica r. Independent of the replica count, so enlarging a run
/// keeps all earlier replicas unchanged.
inline std::uint64_t replica_seed(std::uint64_t master,
                                  std::uint64_t replica) noexcept {
  return derive_seed(master, stream_tag::kReplica, replica);
}

/// xoshiro256++ with splitmix64 state expansion and explicit sampling
/// helpers. Value type; copying forks the stream deterministically.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) noexcept {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64_next(sm);
    // all-zero state is the one invalid xoshiro state
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0)
      state_[0] = 0x9E3779B97F4A7C15ULL;
  }

  static RandomStream derived(std::uint64_t master, std::uint64_t tag,
                              std::uint64_t index) noexcept {
    return RandomStream(derive_seed(master, tag, index));
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform() noexcept { return double(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1); safe under log().
  double uniform_open() noexcept {
    return (double(next_u64() >> 12) + 0.5) * 0x1.0p-52;
  }

  /// Standard normal via Box-Muller; the sine partner is cached.
  double gaussian() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * kPi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  /// Exponential with the given mean; strictly positive output.
  double exponential(double mean) noexcept {
    return -mean * std::log(uniform_open());
  }

  /// Exact Poisson sampling: chunked Knuth multiplication. Cost is O(mean).
  std::uint64_t poisson(double mean) noexcept {
    std::uint64_t count = 0;
    while (mean > 30.0) {
      count += poisson_knuth(30.0);
      mean -= 30.0;
    }
    return count + poisson_knuth(mean);
  }

 private:
  static constexpr double kPi = 3.14159265358979323846;

  static std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t poisson_knuth(double mean) noexcept {
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform_open();
    } while (p > limit);
    return k - 1;
  }

  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace levyif
