#pragma once

#include <cstdint>
#include <random>

namespace rcp {

// Stream kinds used when deriving child seeds from a master seed.
enum class StreamKind : std::uint64_t {
  cure = 1,
  trans = 2,
  collision = 3,
  trial = 4,
  aux = 5,
};

std::uint64_t splitmix64(std::uint64_t x);

// Stable per-stream seed: depends only on (master, kind, index).
std::uint64_t derive_seed(std::uint64_t master, StreamKind kind, std::uint64_t index);

// Combine several integers into one stream index (order-sensitive).
std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v);

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  // Uniform on the open interval (0,1).
  double u01();
  double uniform(double a, double b) { return a + (b - a) * u01(); }
  double exponential(double rate);
  // Sum of k independent Exp(rate) variables.
  double gamma_int(int k, double rate);

 private:
  std::mt19937_64 engine_;
};

}  // namespace rcp
