#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "wiretap/errors.hpp"
#include "wiretap/quantization.hpp"
#include "wiretap/rates.hpp"

using namespace wiretap;
using namespace testing;

namespace {

// Canonical state close to `st`: st * U with U a Cayley transform of a small
// random Hermitian matrix.
EveState rotate_slightly(const EveState& st, double scale, Rng& rng) {
  const int nt = st.n_tx();
  const ComplexMat g = complex_gaussian(nt, nt, rng, scale * scale);
  const ComplexMat herm = 0.5 * (g + g.adjoint());
  const Complex i(0.0, 1.0);
  const ComplexMat u = (eye(nt) - 0.5 * i * herm).inverse() * (eye(nt) + 0.5 * i * herm);
  return EveState(st.matrix() * u);
}

ComplexMat capped_codeword(int nt, int n, double power, Rng& rng) {
  for (;;) {
    ComplexMat x = complex_gaussian(nt, n, rng, power / nt);
    if (x.squaredNorm() / n <= power) return x;
  }
}

}  // namespace

TEST_CASE("quantize_eve examples") {
  ComplexMat row(1, 2);
  row << Complex(0.3, 0.6), std::sqrt(0.55);
  const ComplexMat q = quantize_eve(EveState(row), 2);
  CHECK(q(0, 0) == Complex(0.5, 0.5));
  CHECK(q(0, 1) == Complex(0.5, 0.0));

  ComplexMat grid(1, 2);
  grid << 0.6, Complex(0.0, 0.8);
  CHECK(max_abs_diff(quantize_eve(EveState(grid), 5), grid) < 1e-15);
  CHECK_THROWS_AS(quantize_eve(EveState(grid), 0), ConfigError);
}

TEST_CASE("quantization row error stays below 2 N_T / M^2") {
  SeededRng rng(31);
  for (int m : {2, 10, 100}) {
    const double cap = 2.0 * 3 / (static_cast<double>(m) * m);
    double worst = 0.0;
    for (int k = 0; k < 33334; ++k) {
      const auto st = random_canonical_state(2, 3, rng);
      const ComplexMat q = quantize_eve(st, m);
      for (Eigen::Index r = 0; r < q.rows(); ++r) worst = std::max(worst, (q.row(r) - st.matrix().row(r)).squaredNorm());
      for (Eigen::Index e = 0; e < q.size(); ++e) {
        CHECK(std::abs(q(e).real()) <= 1.0);
        CHECK(std::abs(q(e).imag()) <= 1.0);
      }
    }
    CHECK(worst < cap);
  }
}

TEST_CASE("grid_log_size") {
  CHECK(grid_log_size(1, 1, 1, 1) == doctest::Approx(2.0 * std::log(3.0)));
  CHECK(grid_log_size(1, 1, 1, 0) == 0.0);
  CHECK(grid_log_size(10, 2, 1, 1) == doctest::Approx(4.0 * std::log(21.0)));
}

TEST_CASE("perturbation radii and g") {
  const auto r = perturbation_radii(8, 2, 1, 100, 0.1);
  const double rp = std::sqrt(2.0 * 2 * 1 * 8) / 100.0;
  CHECK(r.r_prime == doctest::Approx(rp));
  CHECK(r.r == doctest::Approx(rp + std::sqrt(1.1)));
  CHECK(std::abs(r.r_prime - 0.056569) < 1e-6);
  CHECK(std::abs(r.r - 1.105375) < 1e-5);
  CHECK(std::abs(g_bound(r) - 0.128264) < 1e-5);
  CHECK(g_bound(r) == doctest::Approx(rp * (2.0 * (rp + std::sqrt(1.1)) + rp)));

  const auto far = perturbation_radii(8, 2, 1, 1e12, 0.1);
  CHECK(far.r_prime < 1e-10);
  CHECK(far.r == doctest::Approx(std::sqrt(1.1)));
  CHECK(perturbation_radii(0, 2, 1, 100, 0.1).r_prime == 0.0);

  PerturbationRadii manual;
  manual.r_prime = 0.1;
  manual.r = 1.5;
  CHECK(g_bound(manual) == doctest::Approx(0.31));
  manual.r_prime = 0.0;
  CHECK(g_bound(manual) == 0.0);
}

TEST_CASE("log-likelihood perturbation bound") {
  SeededRng rng(32);
  const int n = 8, nt = 2, ne = 1;
  const double power = 8.0, eps = 0.1;

  const auto same = random_canonical_trace(ne, nt, n, rng);
  const ComplexMat x0 = capped_codeword(nt, n, power, rng);
  const ComplexMat z0 = eve_observe(x0, same) + 0.1 * complex_gaussian(ne, n, rng);
  const auto c1 = check_loglik_perturbation(x0, z0, same, same, power, 100, eps);
  CHECK(c1.lhs == 0.0);
  CHECK(c1.holds());

  const auto other = random_canonical_trace(ne, nt, n, rng);
  const ComplexMat zero = ComplexMat::Zero(nt, n);
  const auto c2 = check_loglik_perturbation(zero, complex_gaussian(ne, n, rng), same, other, power, 100, eps);
  CHECK(c2.lhs == 0.0);

  for (double m : {10.0, 100.0}) {
    // Row differences of a rotation by scale s are about s * sqrt(N_T); keep
    // most instances inside the admissible set.
    const double scale = 0.5 * std::sqrt(2.0 * nt) / m / std::sqrt(static_cast<double>(nt));
    int applicable = 0, violations = 0;
    double worst_ratio = 0.0;
    for (int k = 0; k < 10000; ++k) {
      const auto a = random_canonical_trace(ne, nt, n, rng);
      std::vector<EveState> bs;
      for (std::size_t i = 0; i < a.length(); ++i) bs.push_back(rotate_slightly(a[i], scale, rng));
      const EveTrace b(std::move(bs));
      const ComplexMat x = capped_codeword(nt, n, power, rng);
      const ComplexMat z = eve_observe(x, a) + complex_gaussian(ne, n, rng);
      const auto c = check_loglik_perturbation(x, z, a, b, power, m, eps);
      // Independent evaluation of both sides.
      const double la = -(z - eve_observe(x, a)).squaredNorm();
      const double lb = -(z - eve_observe(x, b)).squaredNorm();
      CHECK(c.lhs == doctest::Approx(std::abs(la - lb)));
      CHECK(std::abs((eve_log_likelihood(x, z, a) - eve_log_likelihood(x, z, b)) - (la - lb)) < 1e-9);
      if (c.status == CheckStatus::not_applicable) continue;
      ++applicable;
      if (c.status == CheckStatus::violated) ++violations;
      worst_ratio = std::max(worst_ratio, c.lhs / c.rhs);
    }
    CHECK(applicable > 5000);
    CHECK(violations == 0);
    CHECK(worst_ratio <= 1.0);
  }
}

TEST_CASE("chernoff exponents") {
  CHECK(chernoff_exponent(1.0, TailSide::upper) == doctest::Approx(1.0 - std::log(2.0)));
  CHECK(chernoff_exponent(0.5, TailSide::lower) == doctest::Approx(-0.5 - std::log(0.5)));
  CHECK(std::abs(chernoff_exponent(0.30685, TailSide::upper)) > 0.0);
  CHECK(chernoff_exponent(1e-8, TailSide::upper) < 1e-15);
  CHECK(chernoff_exponent(1e-8, TailSide::lower) < 1e-15);
  CHECK_THROWS_AS(chernoff_exponent(0.0, TailSide::upper), ConfigError);
  CHECK_THROWS_AS(chernoff_exponent(1.0, TailSide::lower), ConfigError);
}

TEST_CASE("chernoff exponents bound Monte Carlo tails") {
  std::mt19937_64 eng(33);
  const int n = 200;
  const double eps = 0.3;
  const int trials = 1000000;
  std::gamma_distribution<double> sum_exp(n, 1.0);
  int up = 0, low = 0;
  for (int t = 0; t < trials; ++t) {
    const double mean = sum_exp(eng) / n;
    if (mean >= 1.0 + eps) ++up;
    if (mean <= 1.0 - eps) ++low;
  }
  const double bu = std::exp(-n * chernoff_exponent(eps, TailSide::upper));
  const double bl = std::exp(-n * chernoff_exponent(eps, TailSide::lower));
  CHECK(static_cast<double>(up) / trials <= bu + 3.0 * std::sqrt(bu / trials));
  CHECK(static_cast<double>(low) / trials <= bl + 3.0 * std::sqrt(bl / trials));
}

TEST_CASE("truncation_mass") {
  CHECK(truncation_mass(1, 1, 5.0, 0.0) == doctest::Approx(1.0 - std::exp(-1.0)));
  CHECK(truncation_mass(4, 2, 5.0, 0.999999) > 1.0 - 1e-12);
  double prev = 1.0;
  for (int n : {10, 100, 1000}) {
    const double gap = std::abs(truncation_mass(n, 2, 3.0, 0.0) - 0.5);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 0.01);
  CHECK_THROWS_AS(truncation_mass(1, 1, 0.0, 0.0), ConfigError);

  SeededRng rng(34);
  for (int k = 0; k < 10; ++k) {
    const int n = 1 + static_cast<int>(rng.below(20));
    const int nt = 1 + static_cast<int>(rng.below(3));
    const double p = 0.5 + 10.0 * rng.uniform();
    const double e = 0.6 * rng.uniform();
    const int trials = 20000;
    int hit = 0;
    for (int t = 0; t < trials; ++t) {
      const ComplexMat x = complex_gaussian(nt, n, rng, p * (1.0 - e) / nt);
      if (x.squaredNorm() / n <= p) ++hit;
    }
    const double mu = truncation_mass(n, nt, p, e);
    const double se = std::sqrt(mu * (1.0 - mu) / trials);
    CHECK(std::abs(static_cast<double>(hit) / trials - mu) <= 3.0 * se + 1e-12);
  }
}

TEST_CASE("truncation_exponent") {
  CHECK(truncation_exponent(0.0, 2) == 0.0);
  CHECK(truncation_exponent(0.3, 2) == doctest::Approx(2.0 * (0.3 / 0.7 - std::log1p(0.3 / 0.7))));
  for (int n : {20, 50, 100}) CHECK(1.0 - truncation_mass(n, 2, 4.0, 0.3) <= std::exp(-n * truncation_exponent(0.3, 2)));
}

TEST_CASE("gallager_exponent") {
  SeededRng rng(35);
  const MainChannel ch(random_full_rank(2, 2, rng));
  const auto pc = PowerConfig::from_power(8, 0, 2, 2);
  const double cap = main_mutual_info(ch, pc);
  CHECK(std::abs(gallager_exponent(ch, pc, cap)) < 1e-6);

  double r0 = 0.0;
  for (Eigen::Index i = 0; i < 2; ++i) {
    const double s2 = ch.singular_values()(i) * ch.singular_values()(i);
    r0 += std::log2(1.0 + s2 * pc.per_antenna_var / (s2 + 1.0) / 2.0);
  }
  CHECK(gallager_exponent(ch, pc, 0.0) == doctest::Approx(r0));

  double prev = gallager_exponent(ch, pc, 0.0);
  for (int k = 1; k < 100; ++k) {
    const double e = gallager_exponent(ch, pc, cap * k / 100.0);
    CHECK(e >= 0.0);
    CHECK(e < prev);
    prev = e;
  }
  CHECK(gallager_exponent(ch, pc, 2.0 * cap) == 0.0);
}

TEST_CASE("schedule_params") {
  ScheduleInputs in;
  in.eps_prime = 0.01;
  in.n = 1000;
  in.c_prime = 0.05;
  in.alpha_eps = 0.02;
  in.alpha_eps_p = 0.03;
  in.e_val = 0.1;
  in.power = 8;
  in.n_tx = 2;
  in.n_eve = 1;
  const auto s = schedule_params(in);
  CHECK(s.eps_n == doctest::Approx(std::exp(-10.0)));
  CHECK(s.eps_n == doctest::Approx(4.540e-5).epsilon(1e-3));
  CHECK(s.log_k == doctest::Approx(20.0));
  CHECK(s.log_m == doctest::Approx(20.0));
  CHECK(s.rate_below_c_prime);
  CHECK(s.double_rate_below_e);

  REQUIRE(s.min_n_selection.has_value());
  CHECK(*s.min_n_selection == 51);
  auto at = [&](int n) {
    ScheduleInputs c = in;
    c.n = n;
    return schedule_params(c);
  };
  CHECK_FALSE(at(50).selection_holds);
  CHECK(at(51).selection_holds);

  REQUIRE(s.min_n_grid.has_value());
  CHECK(*s.min_n_grid == 45);
  CHECK_FALSE(at(44).grid_holds);
  CHECK(at(45).grid_holds);
  // Direct check of 2M + 1 <= e^{4 eps' n} around the threshold.
  CHECK(2.0 * std::exp(0.02 * 44) + 1.0 > std::exp(0.04 * 44));
  CHECK(2.0 * std::exp(0.02 * 45) + 1.0 <= std::exp(0.04 * 45));

  REQUIRE(s.min_n_continuity.has_value());
  const auto k = static_cast<int>(*s.min_n_continuity);
  CHECK(at(k).continuity_holds);
  CHECK_FALSE(at(k - 1).continuity_holds);
  // Plain evaluation at the threshold.
  const double m = std::exp(0.02 * k);
  const auto radii = perturbation_radii(8, 2, 1, m, 0.1);
  CHECK(k * g_bound(radii) < std::exp(-0.015 * k));

  ScheduleInputs bad = in;
  bad.eps_prime = 0.06;
  CHECK_FALSE(schedule_params(bad).rate_below_c_prime);
  CHECK_FALSE(schedule_params(bad).min_n_selection.has_value());
  bad.eps_prime = 0.05;
  CHECK_FALSE(schedule_params(bad).double_rate_below_e);
  CHECK_FALSE(schedule_params(bad).rate_below_alpha_eps);
}

TEST_CASE("union bound exponent under the schedule") {
  // grid_log_size - e^{n eps'} with M = e^{2 eps' n}.
  auto direct = [](int n) {
    const double m = std::exp(0.02 * n);
    return grid_log_size(m, 2, 1, n) - std::exp(0.01 * n);
  };
  for (int n = 50; n <= 500; n += 50) CHECK(schedule_log_union_bound(0.01, n, 2, 1) == doctest::Approx(direct(n)));
  // The polynomial grid term dominates up to n of roughly a thousand, so the
  // quantity rises over {50..500}; it falls past the turning point.
  for (int n = 100; n <= 500; n += 50)
    CHECK(schedule_log_union_bound(0.01, n, 2, 1) > schedule_log_union_bound(0.01, n - 50, 2, 1));
  for (int n = 1500; n <= 3000; n += 50)
    CHECK(schedule_log_union_bound(0.01, n, 2, 1) < schedule_log_union_bound(0.01, n - 50, 2, 1));
  CHECK(schedule_log_union_bound(0.01, 3000, 2, 1) < -1e12);
}

TEST_CASE("two_stage_overhead") {
  const auto a = two_stage_overhead(0.01, 1.0);
  CHECK(std::abs(a.c_factor - 1.028854) < 1e-6);
  const auto b = two_stage_overhead(0.0, 1.0);
  CHECK(b.c_factor == 1.0);
  CHECK(b.n2_per_n == 0.0);
  CHECK(std::abs(two_stage_overhead(0.05, 2.0).n2_per_n - 0.072135) < 1e-6);
  CHECK_THROWS_AS(two_stage_overhead(0.01, 0.0), ConfigError);
}
