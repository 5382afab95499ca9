#include "rcp/rng.hpp"

#include <cmath>

namespace rcp {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return splitmix64(h ^ (splitmix64(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

std::uint64_t derive_seed(std::uint64_t master, StreamKind kind, std::uint64_t index) {
  std::uint64_t h = splitmix64(master);
  h = hash_combine(h, static_cast<std::uint64_t>(kind));
  return hash_combine(h, index);
}

double Rng::u01() {
  // 53 random bits, shifted by half an ulp so that 0 and 1 are excluded.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::exponential(double rate) { return -std::log(u01()) / rate; }

double Rng::gamma_int(int k, double rate) {
  double s = 0.0;
  for (int i = 0; i < k; ++i) s += exponential(rate);
  return s;
}

}  // namespace rcp
