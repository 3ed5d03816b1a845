#include "wiretap/quantization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/minima.hpp>

#include "wiretap/errors.hpp"

namespace wiretap {

ComplexMat quantize_eve(const EveState& st, int m) {
  if (m < 1) throw ConfigError("quantize_eve: M must be >= 1");
  const double scale = m;
  return st.matrix().unaryExpr([scale](Complex c) {
    return Complex(std::round(c.real() * scale) / scale, std::round(c.imag() * scale) / scale);
  });
}

double grid_log_size(double m, int n_tx, int n_eve, int n) {
  if (n == 0) return 0.0;
  if (!(m >= 1.0) || n_tx < 1 || n_eve < 1 || n < 0) throw ConfigError("grid_log_size: arguments must be >= 1");
  return 2.0 * n_tx * n_eve * n * std::log(2.0 * m + 1.0);
}

PerturbationRadii perturbation_radii(double power, int n_tx, int n_eve, double m, double eps) {
  if (!(power >= 0.0) || !(m > 0.0) || !(eps > 0.0) || n_tx < 1 || n_eve < 0)
    throw ConfigError("perturbation_radii: invalid arguments");
  PerturbationRadii out;
  out.eps = eps;
  out.r_prime = std::sqrt(2.0 * n_tx * n_eve * power) / m;
  out.r = out.r_prime + std::sqrt(n_eve * (1.0 + eps));
  return out;
}

double g_bound(const PerturbationRadii& radii) { return radii.r_prime * (2.0 * radii.r + radii.r_prime); }

double eve_log_likelihood(const ComplexMat& x, const ComplexMat& z, const EveTrace& trace) {
  const ComplexMat resid = z - eve_observe(x, trace);
  return -static_cast<double>(z.size()) * std::log(std::numbers::pi) - resid.squaredNorm();
}

PerturbationCheck check_loglik_perturbation(const ComplexMat& x, const ComplexMat& z,
                                            const EveTrace& trace_a, const EveTrace& trace_b,
                                            double power, double m, double eps) {
  const auto n = static_cast<std::size_t>(x.cols());
  if (trace_a.length() != n || trace_b.length() != n || z.cols() != x.cols() ||
      z.rows() != trace_a.n_eve() || trace_b.n_eve() != trace_a.n_eve())
    throw DimensionError("check_loglik_perturbation: shapes do not match");

  const auto radii = perturbation_radii(power, trace_a.n_tx(), trace_a.n_eve(), m, eps);
  PerturbationCheck out;
  out.rhs = static_cast<double>(n) * g_bound(radii);

  const double row_cap = 2.0 * trace_a.n_tx() / (m * m);
  bool admissible = x.squaredNorm() / static_cast<double>(n) <= power;
  for (std::size_t i = 0; admissible && i < n; ++i) {
    const ComplexMat d = trace_a[i].matrix() - trace_b[i].matrix();
    for (Eigen::Index r = 0; r < d.rows(); ++r) admissible = admissible && d.row(r).squaredNorm() < row_cap;
  }
  const ComplexMat resid_a = z - eve_observe(x, trace_a);
  admissible = admissible && resid_a.squaredNorm() / static_cast<double>(n) < radii.r * radii.r;

  const ComplexMat resid_b = z - eve_observe(x, trace_b);
  out.lhs = std::abs(resid_b.squaredNorm() - resid_a.squaredNorm());
  if (!admissible) {
    out.status = CheckStatus::not_applicable;
  } else {
    out.status = out.lhs <= out.rhs ? CheckStatus::holds : CheckStatus::violated;
  }
  return out;
}

double chernoff_exponent(double eps, TailSide side) {
  if (side == TailSide::upper) {
    if (!(eps > 0.0)) throw ConfigError("chernoff_exponent: upper side needs eps > 0");
    return eps - std::log1p(eps);
  }
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("chernoff_exponent: lower side needs 0 < eps < 1");
  return -eps - std::log1p(-eps);
}

double truncation_mass(int n, int n_tx, double power, double eps_p) {
  if (!(power > 0.0)) throw ConfigError("truncation_mass: P must be positive");
  if (!(eps_p >= 0.0 && eps_p < 1.0)) throw ConfigError("truncation_mass: eps_P outside [0,1)");
  if (n < 1 || n_tx < 1) throw ConfigError("truncation_mass: n and N_T must be >= 1");
  const double shape = static_cast<double>(n) * n_tx;
  return boost::math::gamma_p(shape, shape / (1.0 - eps_p));
}

double truncation_exponent(double eps_p, int n_tx) {
  if (!(eps_p >= 0.0 && eps_p < 1.0)) throw ConfigError("truncation_exponent: eps_P outside [0,1)");
  if (eps_p == 0.0) return 0.0;
  return n_tx * chernoff_exponent(eps_p / (1.0 - eps_p), TailSide::upper);
}

double gallager_exponent(const MainChannel& ch, const PowerConfig& pc, double rate_bits) {
  if (!(rate_bits >= 0.0)) throw ConfigError("gallager_exponent: negative rate");
  std::vector<double> snr;
  for (Eigen::Index i = 0; i < ch.singular_values().size(); ++i) {
    const double s2 = ch.singular_values()(i) * ch.singular_values()(i);
    snr.push_back(s2 * pc.per_antenna_var / (s2 + 1.0));
  }
  auto objective = [&](double rho) {
    double e0 = 0.0;
    for (double s : snr) e0 += rho * std::log2(1.0 + s / (1.0 + rho));
    return e0 - rho * rate_bits;
  };

  constexpr int kGrid = 200;
  int best = 0;
  double best_val = objective(0.0);
  for (int k = 1; k <= kGrid; ++k) {
    const double v = objective(static_cast<double>(k) / kGrid);
    if (v > best_val) {
      best_val = v;
      best = k;
    }
  }
  const double lo = std::max(0, best - 1) / static_cast<double>(kGrid);
  const double hi = std::min(kGrid, best + 1) / static_cast<double>(kGrid);
  const auto refined =
      boost::math::tools::brent_find_minima([&](double rho) { return -objective(rho); }, lo, hi, 40);
  return std::max({0.0, best_val, -refined.second});
}

namespace {

// ln(n g(r,r')) with M = e^{2 eps' n}; computed without forming M.
double log_continuity_lhs(const ScheduleInputs& in, std::int64_t n) {
  const double log_m = 2.0 * in.eps_prime * static_cast<double>(n);
  const double log_rp = 0.5 * std::log(2.0 * in.n_tx * in.n_eve * in.power) - log_m;
  const double rp = std::exp(log_rp);
  const double r = rp + std::sqrt(in.n_eve * (1.0 + in.eps));
  return std::log(static_cast<double>(n)) + log_rp + std::log(2.0 * r + rp);
}

bool continuity_at(const ScheduleInputs& in, std::int64_t n) {
  return log_continuity_lhs(in, n) < -1.5 * in.eps_prime * static_cast<double>(n);
}

}  // namespace

ScheduleParams schedule_params(const ScheduleInputs& in) {
  if (!(in.eps_prime >= 0.0) || in.n < 1) throw ConfigError("schedule_params: need eps' >= 0 and n >= 1");
  ScheduleParams out;
  out.eps_prime = in.eps_prime;
  out.n = in.n;
  const double n = in.n;
  out.eps_n = std::exp(-n * in.eps_prime);
  out.log_k = 2.0 * in.eps_prime * n;
  out.log_m = 2.0 * in.eps_prime * n;

  out.rate_below_c_prime = in.eps_prime < in.c_prime;
  out.rate_below_alpha_eps = in.eps_prime < in.alpha_eps;
  out.rate_below_alpha_eps_p = in.eps_prime < in.alpha_eps_p;
  out.double_rate_below_e = 2.0 * in.eps_prime < in.e_val;

  // 1 + e^2 e^{-c'n} < 1 + e^{-eps' n}  <=>  n (c' - eps') > 2
  out.selection_holds = n * (in.c_prime - in.eps_prime) > 2.0;
  if (in.c_prime > in.eps_prime)
    out.min_n_selection = static_cast<std::int64_t>(std::floor(2.0 / (in.c_prime - in.eps_prime))) + 1;

  // 2M + 1 <= M^2  <=>  M >= 1 + sqrt(2)
  if (in.eps_prime > 0.0) {
    const double threshold = std::log(1.0 + std::numbers::sqrt2) / (2.0 * in.eps_prime);
    out.grid_holds = n >= threshold;
    out.min_n_grid = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(threshold)));

    out.continuity_holds = in.power > 0.0 ? continuity_at(in, in.n) : true;
    if (in.power <= 0.0) {
      out.min_n_continuity = 1;
    } else {
      constexpr std::int64_t kScanLimit = 100'000'000;
      for (std::int64_t k = 1; k <= kScanLimit; ++k) {
        if (continuity_at(in, k)) {
          out.min_n_continuity = k;
          break;
        }
      }
    }
  }
  return out;
}

double schedule_log_union_bound(double eps_prime, int n, int n_tx, int n_eve) {
  const double log_m = 2.0 * eps_prime * n;
  // ln(2M + 1) = log_m + ln(2 + e^{-log_m})
  const double log_grid = 2.0 * n_tx * n_eve * n * (log_m + std::log(2.0 + std::exp(-log_m)));
  return log_grid - std::exp(n * eps_prime);
}

TwoStageOverhead two_stage_overhead(double eps_prime, double r0) {
  if (!(r0 > 0.0)) throw ConfigError("two_stage_overhead: R0 must be positive");
  if (!(eps_prime >= 0.0)) throw ConfigError("two_stage_overhead: eps' must be >= 0");
  TwoStageOverhead out;
  out.n2_per_n = 2.0 * eps_prime * std::numbers::log2e / r0;
  out.c_factor = out.n2_per_n + 1.0;
  return out;
}

}  // namespace wiretap
