#pragma once

// Truncated-Gaussian binned codebooks with their encoder and decoders.
// Bin and codeword indices are 0-based: codeword (i, j) sits at i*N_j + j.

#include <cstdint>
#include <utility>
#include <vector>

#include "wiretap/channel.hpp"

namespace wiretap {

enum class SecrecyMode { strong, weak };

struct BinningParams {
  int n = 1;
  double rate = 0.0;  // bits per channel use
  std::int64_t n_i = 1;
  std::int64_t n_j = 1;
  double delta_n = 0.0;
  double delta_prime = 0.0;
  SecrecyMode mode = SecrecyMode::strong;

  /// Counts given directly (rate set to log2(N_i N_j)/n).
  static BinningParams with_counts(int n, std::int64_t n_i, std::int64_t n_j,
                                   SecrecyMode mode = SecrecyMode::strong);
  [[nodiscard]] std::int64_t size() const { return n_i * n_j; }
};

/// strong: R = I_main - delta', N_j = ceil(2^{n(I_eve + delta_n)}).
/// weak:   R = I_main - 2 delta_n, N_j = ceil(2^{n(I_eve - delta_n)}).
/// N_i = max(1, floor(2^{nR} / N_j)).
BinningParams binning_params(double i_main, double i_eve, int n, double delta_n, double delta_prime,
                             SecrecyMode mode);

/// Limits for estimators that evaluate the full codebook mixture.
struct ToyScaleLimits {
  std::int64_t max_codewords = std::int64_t{1} << 14;
  int max_n = 32;
};

/// Throws CapError if bp exceeds the limits.
void enforce_limits(const BinningParams& bp, const ToyScaleLimits& limits);

class Codebook {
 public:
  /// Every codeword must be N_T x n and satisfy (1/n)||x||^2 <= power.
  static Codebook from_codewords(std::vector<ComplexMat> codewords, std::int64_t n_i, std::int64_t n_j,
                                 double power, SecrecyMode mode = SecrecyMode::strong);

  [[nodiscard]] const ComplexMat& codeword(std::int64_t i, std::int64_t j) const;
  [[nodiscard]] const ComplexMat& at(std::size_t flat) const { return codewords_[flat]; }
  [[nodiscard]] const std::vector<ComplexMat>& codewords() const { return codewords_; }
  [[nodiscard]] std::int64_t n_i() const { return n_i_; }
  [[nodiscard]] std::int64_t n_j() const { return n_j_; }
  [[nodiscard]] std::size_t size() const { return codewords_.size(); }
  [[nodiscard]] int n() const { return static_cast<int>(codewords_.front().cols()); }
  [[nodiscard]] int n_tx() const { return static_cast<int>(codewords_.front().rows()); }
  [[nodiscard]] double power() const { return power_; }
  [[nodiscard]] SecrecyMode mode() const { return mode_; }
  /// Draws made by rejection sampling (equals size() for from_codewords).
  [[nodiscard]] std::uint64_t attempts() const { return attempts_; }
  [[nodiscard]] double acceptance_rate() const {
    return static_cast<double>(size()) / static_cast<double>(attempts_);
  }

 private:
  friend Codebook sample_codebook(const BinningParams&, const PowerConfig&, Rng&, const ToyScaleLimits&);
  Codebook() = default;

  std::vector<ComplexMat> codewords_;
  std::int64_t n_i_ = 0;
  std::int64_t n_j_ = 0;
  double power_ = 0.0;
  SecrecyMode mode_ = SecrecyMode::strong;
  std::uint64_t attempts_ = 0;
};

/// Rejection sampling of i.i.d. CN(0, per_antenna_var) codewords kept iff
/// (1/n)||x||^2 <= P. Labels are assigned in draw order.
Codebook sample_codebook(const BinningParams& bp, const PowerConfig& pc, Rng& rng,
                         const ToyScaleLimits& limits = {});

struct Encoded {
  const ComplexMat* codeword = nullptr;
  std::int64_t j = 0;
};

/// Picks j uniformly inside bin w.
Encoded encode(std::int64_t w, const Codebook& cb, Rng& rng);

/// Minimum whitened-distance decoder for Y = H Xt + (H N + Z).
class MainDecoder {
 public:
  MainDecoder(const MainChannel& ch, const Codebook& cb);
  [[nodiscard]] std::pair<std::int64_t, std::int64_t> decode(const ComplexMat& y) const;

 private:
  ComplexMat whitener_;
  std::vector<ComplexMat> images_;
  std::int64_t n_j_;
};

std::pair<std::int64_t, std::int64_t> ml_decode_main(const ComplexMat& y, const MainChannel& ch,
                                                     const Codebook& cb);

/// Noise-free eavesdropper images Ht x for every codeword.
class EveImages {
 public:
  EveImages(const Codebook& cb, const EveTrace& trace);
  [[nodiscard]] const ComplexMat& operator[](std::size_t flat) const { return images_[flat]; }
  [[nodiscard]] std::size_t size() const { return images_.size(); }
  [[nodiscard]] std::int64_t n_i() const { return n_i_; }
  [[nodiscard]] std::int64_t n_j() const { return n_j_; }

 private:
  std::vector<ComplexMat> images_;
  std::int64_t n_i_;
  std::int64_t n_j_;
};

/// Fictitious eavesdropper that knows the bin i0 and decodes j.
class EveBinDecoder {
 public:
  EveBinDecoder(const Codebook& cb, const EveTrace& trace);
  [[nodiscard]] std::int64_t decode(const ComplexMat& z, std::int64_t i0) const;
  [[nodiscard]] const EveImages& images() const { return images_; }

 private:
  EveImages images_;
};

std::int64_t eve_bin_decode(const ComplexMat& z, std::int64_t i0, const EveTrace& trace, const Codebook& cb);

}  // namespace wiretap
