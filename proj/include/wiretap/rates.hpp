#pragma once

// Closed-form secrecy rates, secure degrees of freedom, converse bounds and
// time-sharing MAC/BC secrecy rate regions.

#include <functional>
#include <span>
#include <vector>

#include "wiretap/channel.hpp"

namespace wiretap {

/// full: C(x) = log2(1+x) (complex channel). half: C(x) = 0.5 log2(1+x).
enum class LogConvention { full, half };

/// theorem: N_E C(P). exact: N_E log2(1 + P(1-eps_P)/N_T).
enum class LeakageMode { theorem, exact };

struct SecrecyRateResult {
  double rate_bits = 0.0;
  double main_mi = 0.0;
  double leakage_cap = 0.0;
  bool clamped = false;
};

struct RatePoint {
  double r1 = 0.0;
  double r2 = 0.0;
};

struct RateRegion {
  std::vector<RatePoint> raw_points;
  /// Counterclockwise extreme points starting at the origin.
  std::vector<RatePoint> hull;
  /// Time-sharing parameter that produced each raw point (empty for bc).
  std::vector<double> alphas;
};

double effective_power(double pbar, int n_tr);
double capacity_term(double x, LogConvention conv = LogConvention::full);

double main_mutual_info(const MainChannel& ch, const PowerConfig& pc,
                        LogConvention conv = LogConvention::full);
double leakage_cap(const PowerConfig& pc, int n_eve, LeakageMode mode = LeakageMode::theorem,
                   LogConvention conv = LogConvention::full);
SecrecyRateResult secrecy_rate(const MainChannel& ch, const PowerConfig& pc, int n_eve,
                               LogConvention conv = LogConvention::full);
/// Convenience: builds the PowerConfig from pbar (eps_P = 0).
SecrecyRateResult secrecy_rate(const MainChannel& ch, double pbar, int n_eve,
                               LogConvention conv = LogConvention::full);

int sdof(int n_tx, int n_rx, int n_eve);

/// Least-squares slope of rate_fn(pbar) against log2(pbar).
double sdof_slope(const std::function<double(double)>& rate_fn, std::span<const double> pbar_grid);

/// Upper bound on the secrecy rate when the eavesdropper sees the N_E
/// strongest input directions. The budget is spread over the N_m active modes.
double converse_rate_bound(const MainChannel& ch, double pbar, int n_eve,
                           LogConvention conv = LogConvention::full);

/// 101 points evenly spaced on [0.01, 1].
std::vector<double> default_alpha_grid();

RateRegion mac_region(const MainChannel& ch1, const MainChannel& ch2, double pbar, int n_eve,
                      std::span<const double> alpha_grid,
                      LogConvention conv = LogConvention::full);
RateRegion bc_region(const MainChannel& ch1, const MainChannel& ch2, double pbar, int n_eve,
                     LogConvention conv = LogConvention::full);

/// Hull of points, their axis projections and the origin. Counterclockwise
/// from (0,0), collinear points dropped.
std::vector<RatePoint> convex_hull_2d(std::span<const RatePoint> points);

/// True if p lies inside or on the hull (tolerance tol).
bool region_contains(std::span<const RatePoint> hull, RatePoint p, double tol = 1e-9);

double max_sum_rate(std::span<const RatePoint> hull);

/// Slope of the best sum rate on region_fn(pbar) against log2(pbar).
double region_sum_sdof(const std::function<RateRegion(double)>& region_fn,
                       std::span<const double> pbar_grid);

}  // namespace wiretap
