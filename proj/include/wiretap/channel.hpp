#pragma once

// Channel matrices, canonical forms, artificial-noise signalling and
// single-use observation for the legitimate receiver and the eavesdropper.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "wiretap/random.hpp"

namespace wiretap {

using Complex = std::complex<double>;
using ComplexMat = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;

/// Smallest singular value must exceed this fraction of the largest one.
inline constexpr double kRankTolerance = 1e-8;
/// Max-entry tolerance on Ht*Ht^H - I for canonical eavesdropper states.
inline constexpr double kOrthonormalTolerance = 1e-9;

/// Throws InvariantError on an empty matrix or a non-finite entry.
void require_finite(const ComplexMat& m, const char* what);

/// Max-entry (Chebyshev) distance between two equally sized matrices.
double max_abs_diff(const ComplexMat& a, const ComplexMat& b);

/// Static legitimate channel H (N_R x N_T), required to have full rank.
class MainChannel {
 public:
  explicit MainChannel(ComplexMat h);

  [[nodiscard]] const ComplexMat& matrix() const { return h_; }
  /// min(N_T, N_R) singular values, descending.
  [[nodiscard]] const RealVec& singular_values() const { return sv_; }
  [[nodiscard]] int n_tx() const { return static_cast<int>(h_.cols()); }
  [[nodiscard]] int n_rx() const { return static_cast<int>(h_.rows()); }
  [[nodiscard]] int n_modes() const { return static_cast<int>(sv_.size()); }

 private:
  ComplexMat h_;
  RealVec sv_;
};

/// SVD reduction H = left * [D | 0] * right^H (padding placed so the
/// product has H's shape).
struct MainChannelReduction {
  ComplexMat diag;   // N_m x N_m, real nonnegative diagonal, descending
  ComplexMat left;   // N_R x N_R unitary
  ComplexMat right;  // N_T x N_T unitary

  /// left * pad(diag) * right^H
  [[nodiscard]] ComplexMat reconstruct() const;
};

MainChannelReduction reduce_main_channel(const ComplexMat& h);

/// Eavesdropper state in canonical form: N_E x N_T with orthonormal rows.
class EveState {
 public:
  /// Validates the canonical invariant; throws InvariantError otherwise.
  explicit EveState(ComplexMat ht);

  [[nodiscard]] const ComplexMat& matrix() const { return ht_; }
  [[nodiscard]] int n_eve() const { return static_cast<int>(ht_.rows()); }
  [[nodiscard]] int n_tx() const { return static_cast<int>(ht_.cols()); }

 private:
  ComplexMat ht_;
};

/// Length-n sequence of eavesdropper states (one per channel use).
class EveTrace {
 public:
  explicit EveTrace(std::vector<EveState> states);
  /// Same state repeated n times (static eavesdropper).
  static EveTrace constant(const EveState& state, std::size_t n);

  [[nodiscard]] std::size_t length() const { return states_.size(); }
  [[nodiscard]] const EveState& operator[](std::size_t i) const { return states_[i]; }
  [[nodiscard]] const std::vector<EveState>& states() const { return states_; }
  [[nodiscard]] int n_eve() const { return states_.front().n_eve(); }
  [[nodiscard]] int n_tx() const { return states_.front().n_tx(); }

 private:
  std::vector<EveState> states_;
};

/// Power budget and the per-antenna variance of the coding input.
struct PowerConfig {
  double pbar = 0.0;         // average power budget
  double eps_p = 0.0;        // truncation margin in [0, 1)
  int n_tr = 1;              // min(N_T, N_R)
  int n_tx = 1;              // N_T
  double power = 0.0;        // P = max(pbar - n_tr, 0)
  double per_antenna_var = 0.0;  // P (1 - eps_p) / N_T

  static PowerConfig make(double pbar, double eps_p, int n_tr, int n_tx);
  /// Builds a config directly from the backed-off power P.
  static PowerConfig from_power(double power, double eps_p, int n_tr, int n_tx);
  /// P' = per-antenna variance + 1, the eavesdropper output variance per entry.
  [[nodiscard]] double eve_output_var() const { return per_antenna_var + 1.0; }
};

/// Orthonormal-row canonical form of a raw eavesdropper matrix.
EveState canonicalize_eve(const ComplexMat& raw);

/// Uniformly random canonical state: rows of a Haar unitary.
EveState random_canonical_state(int n_eve, int n_tx, Rng& rng);
EveTrace random_canonical_trace(int n_eve, int n_tx, std::size_t n, Rng& rng);

/// Matrix of i.i.d. CN(0, variance) entries.
ComplexMat complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng,
                            double variance = 1.0);

/// X = Xtilde + N with N i.i.d. CN(0, 1) artificial noise.
ComplexMat transmit(const ComplexMat& xtilde, Rng& rng);

/// Y = H X + Z, Z i.i.d. CN(0, 1).
ComplexMat main_observe(const ComplexMat& x, const MainChannel& ch, Rng& rng);

/// Noiseless eavesdropper: column i of the output is trace[i] * x.col(i).
ComplexMat eve_observe(const ComplexMat& x, const EveTrace& trace);

/// Covariance of H N + Z seen by the legitimate receiver: H H^H + I.
ComplexMat effective_noise_cov(const MainChannel& ch);

/// Covariance of the eavesdropper's equivalent noise Ht N, i.e. Ht Ht^H.
ComplexMat eve_equiv_noise_cov(const EveState& st);
/// Raw-matrix overload; throws InvariantError unless Ht Ht^H = I.
ComplexMat eve_equiv_noise_cov(const ComplexMat& ht);

}  // namespace wiretap
