#include "wiretap/rates.hpp"

#include <algorithm>
#include <cmath>

#include "wiretap/errors.hpp"
#include "wiretap/stats.hpp"

namespace wiretap {

double effective_power(double pbar, int n_tr) {
  if (!(pbar >= 0.0)) throw ConfigError("effective_power: negative power budget");
  if (n_tr < 1) throw ConfigError("effective_power: N_TR must be >= 1");
  return std::max(pbar - n_tr, 0.0);
}

double capacity_term(double x, LogConvention conv) {
  if (!(x >= 0.0)) throw InvariantError("capacity_term: negative argument");
  const double c = std::log2(1.0 + x);
  return conv == LogConvention::half ? 0.5 * c : c;
}

double main_mutual_info(const MainChannel& ch, const PowerConfig& pc, LogConvention conv) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < ch.singular_values().size(); ++i) {
    const double s2 = ch.singular_values()(i) * ch.singular_values()(i);
    sum += capacity_term(s2 * pc.power / ((s2 + 1.0) * pc.n_tr), conv);
  }
  return sum;
}

double leakage_cap(const PowerConfig& pc, int n_eve, LeakageMode mode, LogConvention conv) {
  if (n_eve < 0) throw ConfigError("leakage_cap: negative N_E");
  switch (mode) {
    case LeakageMode::theorem:
      return n_eve * capacity_term(pc.power, conv);
    case LeakageMode::exact:
      return n_eve * capacity_term(pc.per_antenna_var, conv);
  }
  throw ConfigError("leakage_cap: unknown mode");
}

SecrecyRateResult secrecy_rate(const MainChannel& ch, const PowerConfig& pc, int n_eve,
                               LogConvention conv) {
  SecrecyRateResult res;
  res.main_mi = main_mutual_info(ch, pc, conv);
  res.leakage_cap = leakage_cap(pc, n_eve, LeakageMode::theorem, conv);
  res.clamped = res.main_mi <= res.leakage_cap;
  res.rate_bits = res.clamped ? 0.0 : res.main_mi - res.leakage_cap;
  return res;
}

SecrecyRateResult secrecy_rate(const MainChannel& ch, double pbar, int n_eve, LogConvention conv) {
  return secrecy_rate(ch, PowerConfig::make(pbar, 0.0, ch.n_modes(), ch.n_tx()), n_eve, conv);
}

int sdof(int n_tx, int n_rx, int n_eve) { return std::max(std::min(n_tx, n_rx) - n_eve, 0); }

double sdof_slope(const std::function<double(double)>& rate_fn, std::span<const double> pbar_grid) {
  if (pbar_grid.size() < 3) throw ConfigError("sdof_slope: need at least 3 grid points");
  if (!std::is_sorted(pbar_grid.begin(), pbar_grid.end()) || pbar_grid.front() <= 0.0)
    throw ConfigError("sdof_slope: grid must be positive and ascending");
  if (pbar_grid.back() < 1e3) throw ConfigError("sdof_slope: largest grid point must be >= 1e3");
  std::vector<double> x, y;
  for (double p : pbar_grid) {
    x.push_back(std::log2(p));
    y.push_back(rate_fn(p));
  }
  return stats::ls_slope(x, y);
}

double converse_rate_bound(const MainChannel& ch, double pbar, int n_eve, LogConvention conv) {
  if (!(pbar >= 0.0)) throw ConfigError("converse_rate_bound: negative power budget");
  const int nm = ch.n_modes();
  if (n_eve >= nm) return 0.0;
  double sum = 0.0;
  for (int i = n_eve; i < nm; ++i) {
    const double d = ch.singular_values()(i);
    sum += capacity_term(d * d * pbar / nm, conv);
  }
  return sum;
}

std::vector<double> default_alpha_grid() {
  std::vector<double> grid(101);
  for (int k = 0; k <= 100; ++k) grid[k] = 0.01 + 0.99 * k / 100.0;
  return grid;
}

namespace {

void require_same_square(const MainChannel& a, const MainChannel& b) {
  if (a.n_tx() != a.n_rx() || b.n_tx() != b.n_rx() || a.n_tx() != b.n_tx())
    throw DimensionError("region: both channels must be N_T x N_T of equal size");
}

// Single-user rate when a fraction `share` of time is used with budget pbar.
double shared_rate(const MainChannel& ch, double pbar, double share, int n_eve, LogConvention conv) {
  if (share <= 0.0) return 0.0;
  const double p = std::max(pbar / share - ch.n_tx(), 0.0);
  const auto pc = PowerConfig::from_power(p, 0.0, ch.n_modes(), ch.n_tx());
  return share * secrecy_rate(ch, pc, n_eve, conv).rate_bits;
}

double cross(RatePoint o, RatePoint a, RatePoint b) {
  return (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1);
}

}  // namespace

RateRegion mac_region(const MainChannel& ch1, const MainChannel& ch2, double pbar, int n_eve,
                      std::span<const double> alpha_grid, LogConvention conv) {
  require_same_square(ch1, ch2);
  if (alpha_grid.empty()) throw ConfigError("mac_region: empty alpha grid");
  RateRegion region;
  for (double a : alpha_grid) {
    if (!(a > 0.0 && a <= 1.0)) throw ConfigError("mac_region: alpha outside (0,1]");
    region.raw_points.push_back(
        {shared_rate(ch1, pbar, a, n_eve, conv), shared_rate(ch2, pbar, 1.0 - a, n_eve, conv)});
    region.alphas.push_back(a);
  }
  region.hull = convex_hull_2d(region.raw_points);
  return region;
}

RateRegion bc_region(const MainChannel& ch1, const MainChannel& ch2, double pbar, int n_eve,
                     LogConvention conv) {
  require_same_square(ch1, ch2);
  RateRegion region;
  region.raw_points = {{0.0, 0.0},
                       {secrecy_rate(ch1, pbar, n_eve, conv).rate_bits, 0.0},
                       {0.0, secrecy_rate(ch2, pbar, n_eve, conv).rate_bits}};
  region.hull = convex_hull_2d(region.raw_points);
  return region;
}

std::vector<RatePoint> convex_hull_2d(std::span<const RatePoint> points) {
  if (points.empty()) throw ConfigError("convex_hull_2d: no points");
  std::vector<RatePoint> pts{{0.0, 0.0}};
  for (const auto& p : points) {
    if (!std::isfinite(p.r1) || !std::isfinite(p.r2))
      throw InvariantError("convex_hull_2d: non-finite point");
    pts.push_back(p);
    pts.push_back({p.r1, 0.0});
    pts.push_back({0.0, p.r2});
  }
  std::sort(pts.begin(), pts.end(), [](RatePoint a, RatePoint b) {
    return a.r1 < b.r1 || (a.r1 == b.r1 && a.r2 < b.r2);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](RatePoint a, RatePoint b) { return a.r1 == b.r1 && a.r2 == b.r2; }),
            pts.end());
  if (pts.size() == 1) return pts;

  // Andrew's monotone chain; non-positive turns are popped so collinear
  // points never survive.
  std::vector<RatePoint> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 1e-12) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 1e-12) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);

  // Rotate so the origin comes first.
  auto origin = std::find_if(hull.begin(), hull.end(),
                             [](RatePoint p) { return p.r1 == 0.0 && p.r2 == 0.0; });
  if (origin != hull.end()) std::rotate(hull.begin(), origin, hull.end());
  return hull;
}

bool region_contains(std::span<const RatePoint> hull, RatePoint p, double tol) {
  if (p.r1 < -tol || p.r2 < -tol) return false;
  if (hull.size() == 1) return std::abs(p.r1 - hull[0].r1) <= tol && std::abs(p.r2 - hull[0].r2) <= tol;
  if (hull.size() == 2) {
    const RatePoint a = hull[0], b = hull[1];
    const double len = std::hypot(b.r1 - a.r1, b.r2 - a.r2);
    if (std::abs(cross(a, b, p)) > tol * len) return false;
    const double t = ((p.r1 - a.r1) * (b.r1 - a.r1) + (p.r2 - a.r2) * (b.r2 - a.r2)) / (len * len);
    return t >= -tol && t <= 1.0 + tol;
  }
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const RatePoint a = hull[i], b = hull[(i + 1) % hull.size()];
    const double len = std::hypot(b.r1 - a.r1, b.r2 - a.r2);
    if (cross(a, b, p) < -tol * len) return false;
  }
  return true;
}

double max_sum_rate(std::span<const RatePoint> hull) {
  double best = 0.0;
  for (const auto& p : hull) best = std::max(best, p.r1 + p.r2);
  return best;
}

double region_sum_sdof(const std::function<RateRegion(double)>& region_fn,
                       std::span<const double> pbar_grid) {
  return sdof_slope([&](double p) { return max_sum_rate(region_fn(p).hull); }, pbar_grid);
}

}  // namespace wiretap
