#pragma once

// Eavesdropper-state quantization grid, continuity bounds, tail exponents,
// the random-coding error exponent and the correlation-elimination schedule.

#include <cstdint>
#include <optional>

#include "wiretap/channel.hpp"

namespace wiretap {

/// Rounds every real and imaginary part to the nearest multiple of 1/M
/// (halves away from zero).
ComplexMat quantize_eve(const EveState& st, int m);

/// Natural log of the grid size (2M+1)^(2 N_T N_E n).
double grid_log_size(double m, int n_tx, int n_eve, int n);

struct PerturbationRadii {
  double r_prime = 0.0;
  double r = 0.0;
  double eps = 0.0;
};

PerturbationRadii perturbation_radii(double power, int n_tx, int n_eve, double m, double eps);
double g_bound(const PerturbationRadii& radii);

enum class CheckStatus { holds, violated, not_applicable };

struct PerturbationCheck {
  double lhs = 0.0;  // |ln f_A(z|x) - ln f_B(z|x)|
  double rhs = 0.0;  // n g(r, r')
  CheckStatus status = CheckStatus::not_applicable;
  [[nodiscard]] bool holds() const { return status == CheckStatus::holds; }
};

/// Compares the Gaussian log-likelihoods of z given x under two traces.
/// Instances outside the admissible set (row differences above 2N_T/M^2,
/// codeword power above P, residual under trace A of at least r^2 per use)
/// are reported as not_applicable.
PerturbationCheck check_loglik_perturbation(const ComplexMat& x, const ComplexMat& z,
                                            const EveTrace& trace_a, const EveTrace& trace_b,
                                            double power, double m, double eps);

/// Log-likelihood ln f(z|x) for unit-variance complex Gaussian noise.
double eve_log_likelihood(const ComplexMat& x, const ComplexMat& z, const EveTrace& trace);

enum class TailSide { upper, lower };

/// Cramer rate for the mean of i.i.d. Exp(1) variables leaving [1-eps, 1+eps]
/// on the given side.
double chernoff_exponent(double eps, TailSide side);

/// Probability that an i.i.d. CN(0, P(1-eps_P)/N_T) codeword of length n
/// satisfies (1/n)||x||^2 <= P.
double truncation_mass(int n, int n_tx, double power, double eps_p);

/// Per-channel-use exponent of 1 - truncation_mass.
double truncation_exponent(double eps_p, int n_tx);

/// Gaussian-input random-coding exponent over the parallel modes of ch.
double gallager_exponent(const MainChannel& ch, const PowerConfig& pc, double rate_bits);

struct ScheduleInputs {
  double eps_prime = 0.0;
  int n = 1;
  double c_prime = 0.0;
  double alpha_eps = 0.0;
  double alpha_eps_p = 0.0;
  double e_val = 0.0;
  // Used only for the continuity condition n g(r,r') < e^{-1.5 eps' n}.
  double power = 1.0;
  int n_tx = 1;
  int n_eve = 1;
  double eps = 0.1;
};

struct ScheduleParams {
  double eps_prime = 0.0;
  int n = 1;
  double eps_n = 0.0;
  double log_k = 0.0;
  double log_m = 0.0;

  bool rate_below_c_prime = false;      // eps' < c'
  bool rate_below_alpha_eps = false;    // eps' < alpha(eps)
  bool rate_below_alpha_eps_p = false;  // eps' < alpha(eps_P)
  bool double_rate_below_e = false;     // 2 eps' < E
  bool selection_holds = false;         // 1 + e^2 e^{-c'n} < 1 + e^{-eps' n}
  bool grid_holds = false;              // 2M + 1 <= e^{4 eps' n}
  bool continuity_holds = false;        // n g(r,r') < e^{-1.5 eps' n}

  std::optional<std::int64_t> min_n_selection;
  std::optional<std::int64_t> min_n_grid;
  std::optional<std::int64_t> min_n_continuity;

  [[nodiscard]] bool all_hold() const {
    return rate_below_c_prime && rate_below_alpha_eps && rate_below_alpha_eps_p &&
           double_rate_below_e && selection_holds && grid_holds && continuity_holds;
  }
};

ScheduleParams schedule_params(const ScheduleInputs& in);

/// log(|S_M| e^{-eps_n K}) under the schedule, i.e. grid_log_size - e^{n eps'}.
double schedule_log_union_bound(double eps_prime, int n, int n_tx, int n_eve);

struct TwoStageOverhead {
  double c_factor = 1.0;
  double n2_per_n = 0.0;
};

TwoStageOverhead two_stage_overhead(double eps_prime, double r0);

}  // namespace wiretap
