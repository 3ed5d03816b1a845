#include "wiretap/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/chi_squared.hpp>

namespace wiretap::stats {

void Accumulator::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void Accumulator::merge(const Accumulator& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double total = static_cast<double>(n_ + other.n_);
  const double delta = other.mean_ - mean_;
  mean_ += delta * static_cast<double>(other.n_) / total;
  m2_ += other.m2_ + delta * delta * static_cast<double>(n_) *
                         static_cast<double>(other.n_) / total;
  n_ += other.n_;
}

Estimate Accumulator::estimate() const {
  Estimate e;
  e.count = n_;
  e.mean = mean_;
  if (n_ > 1) {
    const double var = m2_ / static_cast<double>(n_ - 1);
    e.std_error = std::sqrt(var / static_cast<double>(n_));
  }
  return e;
}

Estimate summarize(std::span<const double> xs) {
  Accumulator acc;
  for (double x : xs) acc.add(x);
  return acc.estimate();
}

double ls_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("ls_slope: need at least two paired points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("ls_slope: degenerate abscissae");
  return sxy / sxx;
}

double log_sum_exp(std::span<const double> v) {
  if (v.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

Interval clopper_pearson(std::uint64_t hits, std::uint64_t trials, double confidence) {
  if (trials == 0 || hits > trials) throw std::invalid_argument("clopper_pearson: bad counts");
  const double a = 1.0 - confidence;
  Interval out;
  const auto k = static_cast<double>(hits);
  const auto n = static_cast<double>(trials);
  if (hits > 0) out.lower = boost::math::quantile(boost::math::beta_distribution<>(k, n - k + 1), a / 2);
  if (hits < trials)
    out.upper = boost::math::quantile(boost::math::beta_distribution<>(k + 1, n - k), 1 - a / 2);
  return out;
}

double chi_square_uniform_pvalue(std::span<const std::uint64_t> counts) {
  if (counts.size() < 2) return 1.0;
  const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}));
  const double expected = total / static_cast<double>(counts.size());
  double chi2 = 0.0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    chi2 += d * d / expected;
  }
  boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, chi2));
}

double binomial_stderr(double p, std::size_t trials) {
  if (trials == 0) return 0.0;
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(trials));
}

}  // namespace wiretap::stats
