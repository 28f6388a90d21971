#pragma once

#include <cstdint>
#include <random>

namespace rcc {

// splitmix64 step; used to derive independent stream seeds from one master
// seed without correlated low bits.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream_id) {
  std::uint64_t s = master ^ (0xd1b54a32d192ed03ULL * (stream_id + 1));
  std::uint64_t a = splitmix64(s);
  std::uint64_t b = splitmix64(s);
  return a ^ (b << 1);
}

// Deterministic random stream. The distribution mappings are hand-rolled on
// top of mt19937_64 so that sequences are identical across standard library
// implementations (std::uniform_real_distribution is not portable).
class RandomStream {
 public:
  RandomStream() : engine_(0) {}
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1).
  double next_unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1]; safe as a log() argument.
  double next_unit_open_low() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform on [-half_width, half_width).
  double next_symmetric(double half_width) {
    return half_width * (2.0 * next_unit() - 1.0);
  }

  // Standard normal via Box-Muller. Draws are generated in pairs; the spare
  // is cached so consecutive calls consume the engine at a fixed rate.
  double next_normal();

  // Uniform integer on [0, n).
  std::uint64_t next_below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rcc
