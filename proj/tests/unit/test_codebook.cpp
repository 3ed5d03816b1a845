#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "wiretap/errors.hpp"
#include "wiretap/estimators.hpp"
#include "wiretap/quantization.hpp"
#include "wiretap/rates.hpp"

using namespace wiretap;
using namespace testing;

TEST_CASE("binning_params examples") {
  const auto s = binning_params(3.1699, 2.3219, 2, 0.3, 0.1, SecrecyMode::strong);
  CHECK(s.n_j == 38);
  CHECK(s.n_j == static_cast<std::int64_t>(std::ceil(std::exp2(2 * (2.3219 + 0.3)))));
  CHECK(s.rate == doctest::Approx(3.0699));
  CHECK(s.n_i == std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(std::exp2(2 * 3.0699) / 38))));

  const auto w = binning_params(3.1699, 2.3219, 2, 0.3, 0.1, SecrecyMode::weak);
  CHECK(w.n_j == 17);
  CHECK(w.rate == doctest::Approx(3.1699 - 0.6));
  CHECK(w.n_i == static_cast<std::int64_t>(std::floor(std::exp2(2 * (3.1699 - 0.6)) / 17)));

  // Exponent n (I_eve + delta_n) = 3 up to rounding noise: exactly 8.
  const auto exact = binning_params(4.0, 1.0 + 1e-13, 2, 0.5, 0.1, SecrecyMode::strong);
  CHECK(exact.n_j == 8);
  const auto exact2 = binning_params(4.0, 1.0 - 1e-13, 2, 0.5, 0.1, SecrecyMode::strong);
  CHECK(exact2.n_j == 8);

  CHECK_THROWS_AS(binning_params(1.0, 1.0, 2, 0.1, 0.1, SecrecyMode::strong), ConfigError);
  CHECK_THROWS_AS(binning_params(1.0, 0.5, 0, 0.1, 0.1, SecrecyMode::strong), ConfigError);
}

TEST_CASE("sample_codebook") {
  SeededRng rng(41);
  const auto pc = PowerConfig::from_power(4.0, 0.5, 2, 2);
  const auto bp = BinningParams::with_counts(3, 64, 32);
  const Codebook cb = sample_codebook(bp, pc, rng);
  CHECK(cb.size() == 2048);
  CHECK(cb.n() == 3);
  CHECK(cb.n_tx() == 2);
  double energy = 0.0;
  for (const auto& x : cb.codewords()) {
    CHECK(x.squaredNorm() / 3.0 <= pc.power);
    energy += x.squaredNorm();
  }
  CHECK(energy / (2048.0 * 6.0) <= pc.per_antenna_var);

  const double mu = truncation_mass(3, 2, 4.0, 0.5);
  const double se = std::sqrt(mu * (1.0 - mu) / static_cast<double>(cb.attempts()));
  CHECK(std::abs(cb.acceptance_rate() - mu) <= 3.0 * se);

  // Labels follow draw order.
  SeededRng replay(41);
  std::size_t next = 0;
  while (next < 20) {
    const ComplexMat x = complex_gaussian(2, 3, replay, pc.per_antenna_var);
    if (x.squaredNorm() / 3.0 > pc.power) continue;
    const auto i = static_cast<std::int64_t>(next) / 32, j = static_cast<std::int64_t>(next) % 32;
    CHECK(max_abs_diff(cb.codeword(i, j), x) == 0.0);
    ++next;
  }
}

TEST_CASE("toy-scale limits") {
  SeededRng rng(42);
  const auto pc = PowerConfig::from_power(4.0, 0.0, 2, 2);
  CHECK_THROWS_AS(sample_codebook(BinningParams::with_counts(33, 1, 1), pc, rng), CapError);
  CHECK_THROWS_AS(sample_codebook(BinningParams::with_counts(2, 129, 128), pc, rng), CapError);
  CHECK_NOTHROW(sample_codebook(BinningParams::with_counts(2, 128, 128), pc, rng));
}

TEST_CASE("Codebook::from_codewords enforces the power cap") {
  ComplexMat x(1, 2);
  x << 2.0, 0.0;
  CHECK_NOTHROW(Codebook::from_codewords({x}, 1, 1, 2.0));
  CHECK_THROWS_AS(Codebook::from_codewords({x}, 1, 1, 1.9), InvariantError);
  CHECK_THROWS_AS(Codebook::from_codewords({x, x}, 1, 1, 2.0), DimensionError);
}

TEST_CASE("encode") {
  SeededRng rng(43);
  const auto pc = PowerConfig::from_power(4.0, 0.0, 2, 2);
  const Codebook single = sample_codebook(BinningParams::with_counts(2, 4, 1), pc, rng);
  for (int k = 0; k < 10; ++k) {
    const auto e = encode(2, single, rng);
    CHECK(e.j == 0);
    CHECK(e.codeword == &single.codeword(2, 0));
  }

  const Codebook cb = sample_codebook(BinningParams::with_counts(2, 3, 10), pc, rng);
  std::vector<std::uint64_t> counts(10, 0);
  for (int t = 0; t < 100000; ++t) {
    const auto e = encode(1, cb, rng);
    ++counts[static_cast<std::size_t>(e.j)];
    if (t < 100) CHECK(max_abs_diff(*e.codeword, cb.codeword(1, e.j)) == 0.0);
  }
  CHECK(stats::chi_square_uniform_pvalue(counts) > 0.01);
  CHECK_THROWS_AS(encode(3, cb, rng), ConfigError);
  CHECK_THROWS_AS(encode(-1, cb, rng), ConfigError);
}

TEST_CASE("main decoder") {
  SeededRng rng(44);
  ComplexMat h(2, 2);
  h << Complex(1.0, 0.5), 0.3, -0.2, Complex(0.0, 1.5);
  const MainChannel ch(h);
  const auto pc = PowerConfig::from_power(6.0, 0.0, 2, 2);
  const Codebook cb = sample_codebook(BinningParams::with_counts(4, 8, 4), pc, rng);
  ZeroNoiseRng stub;
  for (std::int64_t i = 0; i < 8; ++i)
    for (std::int64_t j = 0; j < 4; ++j) {
      const ComplexMat y = main_observe(transmit(cb.codeword(i, j), stub), ch, stub);
      CHECK(ml_decode_main(y, ch, cb) == std::pair{i, j});
    }
  CHECK(estimate_decode_error(cb, ch, 1000, stub).mean == 0.0);

  // Ties go to the smallest index.
  const ComplexMat x = complex_gaussian(2, 2, rng);
  const Codebook twins = Codebook::from_codewords({x, x}, 2, 1, x.squaredNorm());
  CHECK(ml_decode_main(ch.matrix() * x, ch, twins) == std::pair<std::int64_t, std::int64_t>{0, 0});

  const MainChannel strong(10.0 * eye(2));
  const Codebook few = sample_codebook(BinningParams::with_counts(8, 4, 1), PowerConfig::from_power(30.0, 0.0, 2, 2), rng);
  CHECK(estimate_decode_error(few, strong, 20000, rng).mean < 1e-3);
}

TEST_CASE("main decoder fails above capacity") {
  // One mode with s = 1 and P = 0.5: I = log2(1.25).
  SeededRng rng(45);
  ComplexMat one(1, 1);
  one << 1.0;
  const MainChannel ch(one);
  const auto pc = PowerConfig::from_power(0.5, 0.0, 1, 1);
  const double rate = main_mutual_info(ch, pc) + 0.4;
  double prev = 0.0;
  for (int n : {4, 8, 16}) {
    const auto count = static_cast<std::int64_t>(std::llround(std::exp2(n * rate)));
    const Codebook cb = sample_codebook(BinningParams::with_counts(n, count, 1), pc, rng);
    const double lambda = estimate_decode_error(cb, ch, 4000, rng).mean;
    CHECK(lambda > prev);
    prev = lambda;
  }
  CHECK(prev > 0.85);
}

TEST_CASE("eavesdropper bin decoder") {
  SeededRng rng(46);
  const auto pc = PowerConfig::from_power(8.0, 0.0, 2, 2);
  const auto trace = random_canonical_trace(1, 2, 4, rng);
  const Codebook single = sample_codebook(BinningParams::with_counts(4, 5, 1), pc, rng);
  CHECK(eve_bin_decode(complex_gaussian(1, 4, rng), 3, trace, single) == 0);
  CHECK(estimate_decode_error(single, trace, 500, rng).mean == 0.0);

  const Codebook cb = sample_codebook(BinningParams::with_counts(4, 3, 6), pc, rng);
  for (std::int64_t i = 0; i < 3; ++i)
    for (std::int64_t j = 0; j < 6; ++j) CHECK(eve_bin_decode(eve_observe(cb.codeword(i, j), trace), i, trace, cb) == j);
  CHECK_THROWS_AS(eve_bin_decode(complex_gaussian(1, 4, rng), 3, trace, cb), ConfigError);
}

TEST_CASE("eavesdropper sub-codebook error falls with n") {
  SeededRng rng(47);
  const auto pc = PowerConfig::from_power(8.0, 0.0, 2, 2);
  const double i_eve = leakage_cap(pc, 1, LeakageMode::exact);
  double prev = 1.0;
  for (int n : {4, 8, 16}) {
    auto bp = binning_params(4.5, i_eve, n, i_eve - 0.5, 0.0, SecrecyMode::weak);
    CHECK(bp.n_j == static_cast<std::int64_t>(std::ceil(std::exp2(0.5 * n) - 1e-9)));
    bp.n_i = 1;
    double eta = 0.0;
    for (int c = 0; c < 5; ++c) {
      const Codebook cb = sample_codebook(bp, pc, rng);
      eta += estimate_decode_error(cb, random_canonical_trace(1, 2, n, rng), 4000, rng).mean / 5.0;
    }
    CHECK(eta < prev);
    prev = eta;
  }
}

TEST_CASE("decode error estimate is self-consistent") {
  SeededRng rng(48);
  ComplexMat one(1, 1);
  one << 1.0;
  const MainChannel ch(one);
  const auto pc = PowerConfig::from_power(3.0, 0.0, 1, 1);
  const Codebook cb = sample_codebook(BinningParams::with_counts(4, 8, 2), pc, rng);
  const auto ref = estimate_decode_error(cb, ch, 3000 * 10, rng);
  int covered = 0;
  const int reps = 300;
  for (int r = 0; r < reps; ++r) {
    const auto e = estimate_decode_error(cb, ch, 3000, rng);
    if (std::abs(e.mean - ref.mean) <= 3.0 * e.std_error) ++covered;
  }
  CHECK(covered >= 0.99 * reps);

  SeededRng a(5), b(5);
  const auto e1 = estimate_decode_error(cb, ch, 5000, a, 1);
  const auto e4 = estimate_decode_error(cb, ch, 5000, b, 4);
  CHECK(e1.mean == e4.mean);
  CHECK(e1.std_error == e4.std_error);
}
