#include "wiretap/random.hpp"

#include <cmath>

namespace wiretap {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SeededRng::SeededRng(std::uint64_t seed) : engine_(seed) {}

std::complex<double> SeededRng::complex_normal() {
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {re * M_SQRT1_2, im * M_SQRT1_2};
}

double SeededRng::uniform() {
  // 53 random bits -> [0, 1)
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t SeededRng::below(std::uint64_t bound) {
  std::uniform_int_distribution<std::uint64_t> dist(0, bound - 1);
  return dist(engine_);
}

std::uint64_t SeededRng::next_u64() { return engine_(); }

std::unique_ptr<Rng> SeededRng::spawn(std::uint64_t base, std::uint64_t index) const {
  return std::make_unique<SeededRng>(mix_seed(base, index));
}

ZeroNoiseRng::ZeroNoiseRng(std::uint64_t seed) : inner_(seed) {}

std::unique_ptr<Rng> ZeroNoiseRng::spawn(std::uint64_t base, std::uint64_t index) const {
  return std::make_unique<ZeroNoiseRng>(mix_seed(base, index));
}

}  // namespace wiretap
