#include "wiretap/codebook.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "wiretap/errors.hpp"
#include "wiretap/quantization.hpp"

namespace wiretap {

namespace {

constexpr double kSnapTolerance = 1e-9;
constexpr double kPowerSlack = 1e-12;

double snap(double e) {
  const double r = std::round(e);
  return std::abs(e - r) < kSnapTolerance ? r : e;
}

std::int64_t checked_pow2_ceil(double e) {
  if (e > 62.0) throw CapError("binning_params: bin size 2^" + std::to_string(e) + " is too large");
  return static_cast<std::int64_t>(std::ceil(std::exp2(e)));
}

bool within_cap(const ComplexMat& x, double power) {
  return x.squaredNorm() / static_cast<double>(x.cols()) <= power * (1.0 + kPowerSlack);
}

}  // namespace

BinningParams BinningParams::with_counts(int n, std::int64_t n_i, std::int64_t n_j, SecrecyMode mode) {
  if (n < 1 || n_i < 1 || n_j < 1) throw ConfigError("BinningParams: counts must be >= 1");
  BinningParams bp;
  bp.n = n;
  bp.n_i = n_i;
  bp.n_j = n_j;
  bp.mode = mode;
  bp.rate = std::log2(static_cast<double>(n_i) * static_cast<double>(n_j)) / n;
  return bp;
}

BinningParams binning_params(double i_main, double i_eve, int n, double delta_n, double delta_prime,
                             SecrecyMode mode) {
  if (n < 1) throw ConfigError("binning_params: n must be >= 1");
  if (!(i_main > i_eve + delta_n)) throw ConfigError("binning_params: need I_main > I_eve + delta_n");
  BinningParams bp;
  bp.n = n;
  bp.delta_n = delta_n;
  bp.delta_prime = delta_prime;
  bp.mode = mode;
  double bin_exp = 0.0;
  if (mode == SecrecyMode::strong) {
    bp.rate = i_main - delta_prime;
    bin_exp = n * (i_eve + delta_n);
  } else {
    bp.rate = i_main - 2.0 * delta_n;
    bin_exp = n * (i_eve - delta_n);
  }
  if (!(bp.rate > 0.0)) throw ConfigError("binning_params: nonpositive codebook rate");
  bp.n_j = checked_pow2_ceil(snap(bin_exp));
  const double total_exp = snap(n * bp.rate);
  if (total_exp > 62.0) throw CapError("binning_params: codebook size 2^" + std::to_string(total_exp) + " is too large");
  const double total = std::exp2(total_exp);
  bp.n_i = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(total / static_cast<double>(bp.n_j))));
  return bp;
}

void enforce_limits(const BinningParams& bp, const ToyScaleLimits& limits) {
  if (bp.n > limits.max_n)
    throw CapError("n = " + std::to_string(bp.n) + " exceeds the toy-scale limit " + std::to_string(limits.max_n));
  if (bp.n_j > limits.max_codewords || bp.n_i > limits.max_codewords / bp.n_j)
    throw CapError("codebook with " + std::to_string(bp.n_i) + " x " + std::to_string(bp.n_j) +
                   " codewords exceeds the toy-scale limit " + std::to_string(limits.max_codewords));
}

Codebook Codebook::from_codewords(std::vector<ComplexMat> codewords, std::int64_t n_i, std::int64_t n_j,
                                  double power, SecrecyMode mode) {
  if (n_i < 1 || n_j < 1) throw ConfigError("Codebook: counts must be >= 1");
  if (codewords.size() != static_cast<std::size_t>(n_i * n_j))
    throw DimensionError("Codebook: expected " + std::to_string(n_i * n_j) + " codewords");
  for (const auto& x : codewords) {
    require_finite(x, "Codebook");
    if (x.rows() != codewords.front().rows() || x.cols() != codewords.front().cols())
      throw DimensionError("Codebook: codewords differ in shape");
    if (!within_cap(x, power)) throw InvariantError("Codebook: codeword exceeds the power cap");
  }
  Codebook cb;
  cb.codewords_ = std::move(codewords);
  cb.n_i_ = n_i;
  cb.n_j_ = n_j;
  cb.power_ = power;
  cb.mode_ = mode;
  cb.attempts_ = cb.codewords_.size();
  return cb;
}

const ComplexMat& Codebook::codeword(std::int64_t i, std::int64_t j) const {
  if (i < 0 || i >= n_i_ || j < 0 || j >= n_j_) throw ConfigError("Codebook: index out of range");
  return codewords_[static_cast<std::size_t>(i * n_j_ + j)];
}

Codebook sample_codebook(const BinningParams& bp, const PowerConfig& pc, Rng& rng, const ToyScaleLimits& limits) {
  enforce_limits(bp, limits);
  if (pc.power > 0.0 && truncation_mass(bp.n, pc.n_tx, pc.power, pc.eps_p) < 1e-6)
    throw ConfigError("sample_codebook: acceptance probability below 1e-6");
  Codebook cb;
  cb.n_i_ = bp.n_i;
  cb.n_j_ = bp.n_j;
  cb.power_ = pc.power;
  cb.mode_ = bp.mode;
  const auto total = static_cast<std::size_t>(bp.size());
  cb.codewords_.reserve(total);
  while (cb.codewords_.size() < total) {
    ComplexMat x = complex_gaussian(pc.n_tx, bp.n, rng, pc.per_antenna_var);
    ++cb.attempts_;
    if (x.squaredNorm() / bp.n <= pc.power) cb.codewords_.push_back(std::move(x));
  }
  return cb;
}

Encoded encode(std::int64_t w, const Codebook& cb, Rng& rng) {
  if (w < 0 || w >= cb.n_i()) throw ConfigError("encode: message index out of range");
  Encoded out;
  out.j = cb.n_j() == 1 ? 0 : static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(cb.n_j())));
  out.codeword = &cb.codeword(w, out.j);
  return out;
}

MainDecoder::MainDecoder(const MainChannel& ch, const Codebook& cb) : n_j_(cb.n_j()) {
  if (cb.n_tx() != ch.n_tx()) throw DimensionError("MainDecoder: codebook and channel disagree on N_T");
  Eigen::LLT<ComplexMat> llt(effective_noise_cov(ch));
  const ComplexMat eye = ComplexMat::Identity(ch.n_rx(), ch.n_rx());
  whitener_ = llt.matrixL().solve(eye);
  images_.reserve(cb.size());
  const ComplexMat wh = whitener_ * ch.matrix();
  for (const auto& x : cb.codewords()) images_.push_back(wh * x);
}

std::pair<std::int64_t, std::int64_t> MainDecoder::decode(const ComplexMat& y) const {
  const ComplexMat wy = whitener_ * y;
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < images_.size(); ++k) {
    const double d = (wy - images_[k]).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  const auto flat = static_cast<std::int64_t>(best);
  return {flat / n_j_, flat % n_j_};
}

std::pair<std::int64_t, std::int64_t> ml_decode_main(const ComplexMat& y, const MainChannel& ch,
                                                     const Codebook& cb) {
  return MainDecoder(ch, cb).decode(y);
}

EveImages::EveImages(const Codebook& cb, const EveTrace& trace) : n_i_(cb.n_i()), n_j_(cb.n_j()) {
  images_.reserve(cb.size());
  for (const auto& x : cb.codewords()) images_.push_back(eve_observe(x, trace));
}

EveBinDecoder::EveBinDecoder(const Codebook& cb, const EveTrace& trace) : images_(cb, trace) {}

std::int64_t EveBinDecoder::decode(const ComplexMat& z, std::int64_t i0) const {
  if (i0 < 0 || i0 >= images_.n_i()) throw ConfigError("eve_bin_decode: bin index out of range");
  std::int64_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::int64_t j = 0; j < images_.n_j(); ++j) {
    const double d = (z - images_[static_cast<std::size_t>(i0 * images_.n_j() + j)]).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

std::int64_t eve_bin_decode(const ComplexMat& z, std::int64_t i0, const EveTrace& trace, const Codebook& cb) {
  return EveBinDecoder(cb, trace).decode(z, i0);
}

}  // namespace wiretap
