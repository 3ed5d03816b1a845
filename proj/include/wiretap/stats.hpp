#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace wiretap::stats {

/// Sample mean with its standard error.
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
};

/// Welford accumulator; merge() combines partial results in a fixed order.
class Accumulator {
 public:
  void add(double x);
  void merge(const Accumulator& other);
  [[nodiscard]] Estimate estimate() const;
  [[nodiscard]] std::size_t count() const { return n_; }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

Estimate summarize(std::span<const double> xs);

/// Least-squares slope of y against x.
double ls_slope(std::span<const double> x, std::span<const double> y);

/// Numerically stable log(sum(exp(v))).
double log_sum_exp(std::span<const double> v);

/// Two-sided Clopper-Pearson interval at the given confidence level.
struct Interval {
  double lower = 0.0;
  double upper = 1.0;
};
Interval clopper_pearson(std::uint64_t hits, std::uint64_t trials, double confidence = 0.95);

/// Upper-tail p-value of Pearson's chi-square statistic for equiprobable
/// categories.
double chi_square_uniform_pvalue(std::span<const std::uint64_t> counts);

/// Binomial standard error of a proportion.
double binomial_stderr(double p, std::size_t trials);

}  // namespace wiretap::stats
