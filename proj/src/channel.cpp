#include "wiretap/channel.hpp"

#include <cmath>
#include <string>

#include "wiretap/errors.hpp"

namespace wiretap {

namespace {

std::string shape(const ComplexMat& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

Eigen::JacobiSVD<ComplexMat> full_svd(const ComplexMat& m) {
  return Eigen::JacobiSVD<ComplexMat>(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

}  // namespace

void require_finite(const ComplexMat& m, const char* what) {
  if (m.size() == 0) throw InvariantError(std::string(what) + ": empty matrix");
  if (!m.allFinite()) throw InvariantError(std::string(what) + ": non-finite entry");
}

double max_abs_diff(const ComplexMat& a, const ComplexMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("max_abs_diff: shape " + shape(a) + " vs " + shape(b));
  return (a - b).cwiseAbs().maxCoeff();
}

MainChannel::MainChannel(ComplexMat h) : h_(std::move(h)) {
  require_finite(h_, "MainChannel");
  sv_ = Eigen::JacobiSVD<ComplexMat>(h_).singularValues();
  if (sv_(0) <= 0.0 || sv_(sv_.size() - 1) <= kRankTolerance * sv_(0))
    throw RankError("MainChannel: matrix " + shape(h_) + " is rank deficient");
}

ComplexMat MainChannelReduction::reconstruct() const {
  ComplexMat padded = ComplexMat::Zero(left.rows(), right.rows());
  padded.topLeftCorner(diag.rows(), diag.cols()) = diag;
  return left * padded * right.adjoint();
}

MainChannelReduction reduce_main_channel(const ComplexMat& h) {
  const MainChannel ch(h);
  auto svd = full_svd(h);
  MainChannelReduction out;
  out.diag = svd.singularValues().cast<Complex>().asDiagonal();
  out.left = svd.matrixU();
  out.right = svd.matrixV();
  return out;
}

EveState::EveState(ComplexMat ht) : ht_(std::move(ht)) {
  require_finite(ht_, "EveState");
  if (ht_.rows() > ht_.cols())
    throw DimensionError("EveState: N_E > N_T (" + shape(ht_) + ")");
  const ComplexMat gram = ht_ * ht_.adjoint();
  const ComplexMat eye = ComplexMat::Identity(ht_.rows(), ht_.rows());
  if (max_abs_diff(gram, eye) > kOrthonormalTolerance)
    throw InvariantError("EveState: rows are not orthonormal");
}

EveTrace::EveTrace(std::vector<EveState> states) : states_(std::move(states)) {
  if (states_.empty()) throw DimensionError("EveTrace: empty trace");
  for (const auto& s : states_) {
    if (s.n_eve() != n_eve() || s.n_tx() != n_tx())
      throw DimensionError("EveTrace: states differ in shape");
  }
}

EveTrace EveTrace::constant(const EveState& state, std::size_t n) {
  return EveTrace(std::vector<EveState>(n, state));
}

PowerConfig PowerConfig::make(double pbar, double eps_p, int n_tr, int n_tx) {
  if (!(pbar >= 0.0)) throw ConfigError("PowerConfig: negative power budget");
  PowerConfig pc = from_power(std::max(pbar - n_tr, 0.0), eps_p, n_tr, n_tx);
  pc.pbar = pbar;
  return pc;
}

PowerConfig PowerConfig::from_power(double power, double eps_p, int n_tr, int n_tx) {
  if (!(power >= 0.0)) throw ConfigError("PowerConfig: negative power");
  if (!(eps_p >= 0.0 && eps_p < 1.0)) throw ConfigError("PowerConfig: eps_p outside [0,1)");
  if (n_tr < 1 || n_tx < 1) throw ConfigError("PowerConfig: antenna counts must be >= 1");
  PowerConfig pc;
  pc.pbar = power + n_tr;
  pc.eps_p = eps_p;
  pc.n_tr = n_tr;
  pc.n_tx = n_tx;
  pc.power = power;
  pc.per_antenna_var = power * (1.0 - eps_p) / n_tx;
  return pc;
}

EveState canonicalize_eve(const ComplexMat& raw) {
  require_finite(raw, "canonicalize_eve");
  const Eigen::Index ne = raw.rows();
  const Eigen::Index nt = raw.cols();
  if (ne > nt) throw DimensionError("canonicalize_eve: N_E > N_T (" + shape(raw) + ")");

  auto svd = full_svd(raw);
  const RealVec& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  Eigen::Index rank = 0;
  while (rank < s.size() && smax > 0.0 && s(rank) > kRankTolerance * smax) ++rank;

  // Row space basis: the leading right singular vectors, then standard basis
  // vectors orthogonalized against everything chosen so far.
  ComplexMat basis(nt, ne);
  basis.leftCols(rank) = svd.matrixV().leftCols(rank);
  Eigen::Index filled = rank;
  for (Eigen::Index k = 0; k < nt && filled < ne; ++k) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Unit(nt, k);
    for (Eigen::Index c = 0; c < filled; ++c) v -= basis.col(c) * basis.col(c).dot(v);
    for (Eigen::Index c = 0; c < filled; ++c) v -= basis.col(c) * basis.col(c).dot(v);
    const double norm = v.norm();
    if (norm < 1e-6) continue;
    basis.col(filled++) = v / norm;
  }

  ComplexMat ht = svd.matrixU() * basis.adjoint();
  if (rank == 0) ht = basis.adjoint();
  return EveState(std::move(ht));
}

ComplexMat complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng, double variance) {
  const double scale = std::sqrt(variance);
  ComplexMat m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = scale * rng.complex_normal();
  return m;
}

EveState random_canonical_state(int n_eve, int n_tx, Rng& rng) {
  if (n_eve < 1 || n_eve > n_tx) throw DimensionError("random_canonical_state: need 1 <= N_E <= N_T");
  const ComplexMat g = complex_gaussian(n_tx, n_tx, rng);
  Eigen::HouseholderQR<ComplexMat> qr(g);
  ComplexMat q = qr.householderQ() * ComplexMat::Identity(n_tx, n_tx);
  const ComplexMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n_tx; ++k) {
    const Complex d = r(k, k);
    const double a = std::abs(d);
    if (a > 0.0) q.col(k) *= d / a;
  }
  return canonicalize_eve(q.topRows(n_eve));
}

EveTrace random_canonical_trace(int n_eve, int n_tx, std::size_t n, Rng& rng) {
  std::vector<EveState> states;
  states.reserve(n);
  for (std::size_t i = 0; i < n; ++i) states.push_back(random_canonical_state(n_eve, n_tx, rng));
  return EveTrace(std::move(states));
}

ComplexMat transmit(const ComplexMat& xtilde, Rng& rng) {
  return xtilde + complex_gaussian(xtilde.rows(), xtilde.cols(), rng);
}

ComplexMat main_observe(const ComplexMat& x, const MainChannel& ch, Rng& rng) {
  if (x.rows() != ch.n_tx())
    throw DimensionError("main_observe: input has " + std::to_string(x.rows()) + " rows, channel expects " +
                         std::to_string(ch.n_tx()));
  return ch.matrix() * x + complex_gaussian(ch.n_rx(), x.cols(), rng);
}

ComplexMat eve_observe(const ComplexMat& x, const EveTrace& trace) {
  if (x.rows() != trace.n_tx() || static_cast<std::size_t>(x.cols()) != trace.length())
    throw DimensionError("eve_observe: input " + shape(x) + " does not match trace");
  ComplexMat out(trace.n_eve(), x.cols());
  for (Eigen::Index i = 0; i < x.cols(); ++i) out.col(i) = trace[i].matrix() * x.col(i);
  return out;
}

ComplexMat effective_noise_cov(const MainChannel& ch) {
  const auto& h = ch.matrix();
  return h * h.adjoint() + ComplexMat::Identity(h.rows(), h.rows());
}

ComplexMat eve_equiv_noise_cov(const EveState& st) {
  return st.matrix() * st.matrix().adjoint();
}

ComplexMat eve_equiv_noise_cov(const ComplexMat& ht) {
  require_finite(ht, "eve_equiv_noise_cov");
  ComplexMat cov = ht * ht.adjoint();
  if (max_abs_diff(cov, ComplexMat::Identity(ht.rows(), ht.rows())) > kOrthonormalTolerance)
    throw InvariantError("eve_equiv_noise_cov: state is not canonical");
  return cov;
}

}  // namespace wiretap
