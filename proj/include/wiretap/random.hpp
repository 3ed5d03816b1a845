#pragma once

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <thread>
#include <vector>

namespace wiretap {

/// Random source used by every stochastic operation.
///
/// Gaussian draws are rotationally invariant complex normals with
/// E|z|^2 = 1 (real and imaginary parts each have variance 1/2).
/// `spawn` derives an independent child stream from a base value and an
/// index; Monte Carlo loops split their work into fixed-size blocks and
/// give every block its own child so results do not depend on how many
/// worker threads run them.
class Rng {
 public:
  virtual ~Rng() = default;

  virtual std::complex<double> complex_normal() = 0;
  virtual double uniform() = 0;
  /// Uniform integer in [0, bound).
  virtual std::uint64_t below(std::uint64_t bound) = 0;
  virtual std::uint64_t next_u64() = 0;

  [[nodiscard]] virtual std::unique_ptr<Rng> spawn(std::uint64_t base,
                                                   std::uint64_t index) const = 0;
};

/// splitmix64 finalizer; used to derive child seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

class SeededRng final : public Rng {
 public:
  explicit SeededRng(std::uint64_t seed);

  std::complex<double> complex_normal() override;
  double uniform() override;
  std::uint64_t below(std::uint64_t bound) override;
  std::uint64_t next_u64() override;
  [[nodiscard]] std::unique_ptr<Rng> spawn(std::uint64_t base,
                                           std::uint64_t index) const override;

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Test stub: every Gaussian draw is exactly zero. Uniform draws still come
/// from a seeded engine so index selection keeps working.
class ZeroNoiseRng final : public Rng {
 public:
  explicit ZeroNoiseRng(std::uint64_t seed = 0);

  std::complex<double> complex_normal() override { return {0.0, 0.0}; }
  double uniform() override { return inner_.uniform(); }
  std::uint64_t below(std::uint64_t bound) override { return inner_.below(bound); }
  std::uint64_t next_u64() override { return inner_.next_u64(); }
  [[nodiscard]] std::unique_ptr<Rng> spawn(std::uint64_t base,
                                           std::uint64_t index) const override;

 private:
  SeededRng inner_;
};

/// Number of samples handled by one Monte Carlo block. Fixed so that the
/// block decomposition (and therefore every derived stream) is the same for
/// any thread count.
inline constexpr std::size_t kBlockSize = 512;

/// Runs fn(block_index, begin, end) over [0, count) in kBlockSize chunks on
/// up to `threads` workers. fn must only write to storage owned by its block.
template <class Fn>
void run_blocks(std::size_t count, unsigned threads, Fn&& fn) {
  const std::size_t blocks = (count + kBlockSize - 1) / kBlockSize;
  if (blocks == 0) return;
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), blocks));
  auto body = [&](std::size_t b) {
    const std::size_t lo = b * kBlockSize;
    fn(b, lo, std::min(count, lo + kBlockSize));
  };
  if (workers == 1) {
    for (std::size_t b = 0; b < blocks; ++b) body(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t b = next++; b < blocks; b = next++) body(b);
    });
  }
}

}  // namespace wiretap
