#pragma once

#include <cmath>

#include "wiretap/channel.hpp"

namespace testing {

using wiretap::Complex;
using wiretap::ComplexMat;

inline ComplexMat diag(std::initializer_list<double> values) {
  ComplexMat m = ComplexMat::Zero(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(values.size()));
  Eigen::Index k = 0;
  for (double v : values) {
    m(k, k) = v;
    ++k;
  }
  return m;
}

inline ComplexMat eye(int n) { return ComplexMat::Identity(n, n); }

// Sample covariance (1/m) sum v v^H of the columns of a matrix.
inline ComplexMat column_cov(const ComplexMat& samples) {
  return samples * samples.adjoint() / static_cast<double>(samples.cols());
}

inline ComplexMat random_full_rank(int rows, int cols, wiretap::Rng& rng) {
  return wiretap::complex_gaussian(rows, cols, rng) + ComplexMat::Identity(rows, cols);
}

}  // namespace testing
