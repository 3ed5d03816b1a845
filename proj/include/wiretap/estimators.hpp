#pragma once

// Monte Carlo estimators over sampled codebooks: decoding errors,
// information density, variational distance, leakage and the lemma checks.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "wiretap/codebook.hpp"
#include "wiretap/stats.hpp"

namespace wiretap {

/// Main-receiver block error over uniform (i, j) with artificial noise.
stats::Estimate estimate_decode_error(const Codebook& cb, const MainChannel& ch, std::size_t trials, Rng& rng,
                                      unsigned threads = 1);
/// Fictitious eavesdropper error eta: bin i known, j decoded.
stats::Estimate estimate_decode_error(const Codebook& cb, const EveTrace& trace, std::size_t trials, Rng& rng,
                                      unsigned threads = 1);

/// Per-use information density of the Gaussian-input eavesdropper channel.
double info_density(const ComplexMat& x, const ComplexMat& z, const EveTrace& trace, const PowerConfig& pc);

using TraceFactory = std::function<EveTrace(int n, Rng& rng)>;

/// A fresh random canonical trace per call.
TraceFactory random_trace_factory(int n_eve, int n_tx);

struct TailPoint {
  int n = 0;
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
  double tail = 0.0;
  stats::Interval interval;
  /// Tail value used in the fit (Clopper-Pearson upper bound when hits = 0).
  double fit_value = 0.0;
  stats::Estimate mean_density;
};

struct TailResult {
  std::vector<TailPoint> points;
  double reference = 0.0;    // N_E log2 P'
  double fit_slope = 0.0;    // d ln(tail) / dn
  double chernoff_floor = 0.0;
};

/// Chernoff exponent (per use, natural log) bounding the upper deviation of
/// the information density by delta bits.
double info_density_chernoff_floor(double delta, int n_eve);

TailResult info_density_tail(std::span<const int> ns, double delta, const PowerConfig& pc, int n_eve,
                             const TraceFactory& traces, std::size_t trials, Rng& rng, unsigned threads = 1);

enum class DistanceMode { mixture, marginal };

struct LeakageEstimate {
  double d_hat = 0.0;
  double std_error = 0.0;
  bool saturated = false;
  std::size_t samples = 0;
};

/// Average over w in w_subset and z ~ CN(0, P' I) of (1 - f_{C|w}(z)/f_G(z))^+.
LeakageEstimate estimate_variational_distance(const Codebook& cb, const EveTrace& trace, const PowerConfig& pc,
                                              std::span<const std::int64_t> w_subset, std::size_t samples,
                                              Rng& rng, unsigned threads = 1,
                                              DistanceMode mode = DistanceMode::mixture);

/// All bins.
std::vector<std::int64_t> all_messages(const Codebook& cb);

/// d log2(|W| / d), 0 at d = 0.
double leakage_from_distance(double d, double w_count);

stats::Estimate estimate_leakage_mi(const Codebook& cb, const EveTrace& trace, std::size_t samples, Rng& rng,
                                    unsigned threads = 1);

struct Lemma9Assessment {
  double d = 0.0;           // min(1, 4 d' + 8 e^{-n alpha(eps_P)})
  double bound = 0.0;       // d log2(N_i / d)
  double bound_stderr = 0.0;
  double mi_hat = 0.0;
  double mi_stderr = 0.0;
  bool holds = false;       // mi_hat <= bound + 3 combined stderr
};

Lemma9Assessment lemma9_assessment(const LeakageEstimate& dist, const stats::Estimate& mi, std::int64_t n_i, int n,
                                   const PowerConfig& pc);

struct TruncationDistance {
  double surrogate = 0.0;     // 4 (1 - mu), mu from the gamma CDF
  double mc_estimate = 0.0;   // 4 (1 - mu_hat)
  double mc_stderr = 0.0;
  double mu_exact = 0.0;
  double mu_hat = 0.0;
  double bound = 0.0;         // 4 e^{-n alpha(eps_P)}
};

TruncationDistance truncated_vs_gaussian_distance(int n, const PowerConfig& pc, std::size_t samples, Rng& rng,
                                                  unsigned threads = 1);

/// Monte Carlo estimate of the truncation mass.
stats::Estimate truncation_mass_mc(int n, const PowerConfig& pc, std::size_t samples, Rng& rng, unsigned threads = 1);

struct SecondMomentCheck {
  double empirical = 0.0;
  double std_error = 0.0;
  double expected = 0.0;  // exact mean over codewords plus n N_E
  double bound = 0.0;     // n N_E (P + 1)
  bool holds = false;
};

SecondMomentCheck eve_second_moment_check(const Codebook& cb, const EveTrace& trace, std::size_t trials, Rng& rng,
                                          unsigned threads = 1);

struct SymmetryCheck {
  stats::Estimate eta_a;
  stats::Estimate eta_b;
  bool compatible = false;
};

SymmetryCheck lemma10_symmetry_check(const BinningParams& bp, const PowerConfig& pc, const EveTrace& trace_a,
                                     const EveTrace& trace_b, std::size_t n_codebooks, std::size_t trials, Rng& rng,
                                     unsigned threads = 1);

struct TwoStageEncoded {
  std::size_t k = 0;
  std::int64_t j = 0;
  const ComplexMat* codeword = nullptr;
  int n2 = 0;  // stage-2 channel uses carrying k at rate R0
};

TwoStageEncoded two_stage_encode(std::int64_t w, std::span<const Codebook> books, double r0, Rng& rng);

struct TwoStageDistance {
  std::vector<LeakageEstimate> per_book;
  double mean = 0.0;
  double std_error = 0.0;
};

/// Distance of the K-book mixture, averaged per book.
TwoStageDistance two_stage_distance(std::span<const Codebook> books, const EveTrace& trace, const PowerConfig& pc,
                                    std::size_t samples, Rng& rng, unsigned threads = 1);

}  // namespace wiretap
