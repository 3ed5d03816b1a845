#include "wiretap/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "wiretap/errors.hpp"
#include "wiretap/quantization.hpp"

namespace wiretap {

namespace {

constexpr double kSaturationLog = 700.0;

// Runs f(rng, index) for every index and merges per-block accumulators in
// block order.
template <class F>
stats::Accumulator accumulate(std::size_t count, Rng& rng, unsigned threads, F&& f) {
  const std::uint64_t base = rng.next_u64();
  const std::size_t blocks = (count + kBlockSize - 1) / kBlockSize;
  std::vector<stats::Accumulator> partial(blocks);
  run_blocks(count, threads, [&](std::size_t b, std::size_t lo, std::size_t hi) {
    auto child = rng.spawn(base, b);
    for (std::size_t t = lo; t < hi; ++t) partial[b].add(f(*child, t));
  });
  stats::Accumulator total;
  for (const auto& a : partial) total.merge(a);
  return total;
}

double sq_dist(const ComplexMat& a, const ComplexMat& b) { return (a - b).squaredNorm(); }

}  // namespace

stats::Estimate estimate_decode_error(const Codebook& cb, const MainChannel& ch, std::size_t trials, Rng& rng,
                                      unsigned threads) {
  if (trials == 0) throw ConfigError("estimate_decode_error: trials must be >= 1");
  const MainDecoder dec(ch, cb);
  const auto size = static_cast<std::uint64_t>(cb.size());
  return accumulate(trials, rng, threads, [&](Rng& r, std::size_t) {
           const auto flat = static_cast<std::int64_t>(r.below(size));
           const ComplexMat y = main_observe(transmit(cb.at(static_cast<std::size_t>(flat)), r), ch, r);
           const auto [i, j] = dec.decode(y);
           return (i * cb.n_j() + j == flat) ? 0.0 : 1.0;
         })
      .estimate();
}

stats::Estimate estimate_decode_error(const Codebook& cb, const EveTrace& trace, std::size_t trials, Rng& rng,
                                      unsigned threads) {
  if (trials == 0) throw ConfigError("estimate_decode_error: trials must be >= 1");
  const EveBinDecoder dec(cb, trace);
  const auto size = static_cast<std::uint64_t>(cb.size());
  return accumulate(trials, rng, threads, [&](Rng& r, std::size_t) {
           const auto flat = static_cast<std::int64_t>(r.below(size));
           const ComplexMat z = eve_observe(transmit(cb.at(static_cast<std::size_t>(flat)), r), trace);
           return dec.decode(z, flat / cb.n_j()) == flat % cb.n_j() ? 0.0 : 1.0;
         })
      .estimate();
}

double info_density(const ComplexMat& x, const ComplexMat& z, const EveTrace& trace, const PowerConfig& pc) {
  const double n = static_cast<double>(x.cols());
  const double p_prime = pc.eve_output_var();
  const double resid = (z - eve_observe(x, trace)).squaredNorm();
  return trace.n_eve() * std::log2(p_prime) + (z.squaredNorm() / (n * p_prime) - resid / n) * std::numbers::log2e;
}

TraceFactory random_trace_factory(int n_eve, int n_tx) {
  return [n_eve, n_tx](int n, Rng& rng) { return random_canonical_trace(n_eve, n_tx, static_cast<std::size_t>(n), rng); };
}

double info_density_chernoff_floor(double delta, int n_eve) {
  if (!(delta > 0.0) || n_eve < 1) throw ConfigError("info_density_chernoff_floor: need delta > 0, N_E >= 1");
  // Split the normalized deviation delta'' between an upper excursion of
  // ||z||^2 / P' and a lower excursion of the noise energy.
  const double dd = delta / (n_eve * std::numbers::log2e);
  auto up = [&](double e2) {
    const double e1 = dd - e2;
    return e1 > 0.0 ? chernoff_exponent(e1, TailSide::upper) : 0.0;
  };
  auto low = [](double e2) { return e2 > 0.0 ? chernoff_exponent(e2, TailSide::lower) : 0.0; };
  const double hi = std::min(dd, 1.0 - 1e-12);
  auto gap = [&](double e2) { return low(e2) - up(e2); };
  boost::math::tools::eps_tolerance<double> tol(50);
  const auto root = boost::math::tools::bisect(gap, 1e-15, hi, tol);
  const double e2 = 0.5 * (root.first + root.second);
  return n_eve * std::min(low(e2), up(e2));
}

TailResult info_density_tail(std::span<const int> ns, double delta, const PowerConfig& pc, int n_eve,
                             const TraceFactory& traces, std::size_t trials, Rng& rng, unsigned threads) {
  if (!(delta > 0.0)) throw ConfigError("info_density_tail: delta must be positive");
  if (trials == 0 || ns.empty()) throw ConfigError("info_density_tail: empty budget");
  constexpr std::size_t kPool = 16;
  TailResult out;
  out.reference = n_eve * std::log2(pc.eve_output_var());
  out.chernoff_floor = info_density_chernoff_floor(delta, n_eve);
  const double threshold = out.reference + delta;

  for (int n : ns) {
    std::vector<EveTrace> pool;
    for (std::size_t k = 0; k < kPool; ++k) pool.push_back(traces(n, rng));

    const std::uint64_t base = rng.next_u64();
    const std::size_t blocks = (trials + kBlockSize - 1) / kBlockSize;
    std::vector<stats::Accumulator> dens(blocks);
    std::vector<std::uint64_t> hits(blocks, 0);
    run_blocks(trials, threads, [&](std::size_t b, std::size_t lo, std::size_t hi) {
      auto r = rng.spawn(base, b);
      for (std::size_t t = lo; t < hi; ++t) {
        const EveTrace& trace = pool[r->below(kPool)];
        const ComplexMat x = complex_gaussian(pc.n_tx, n, *r, pc.per_antenna_var);
        const ComplexMat z = eve_observe(transmit(x, *r), trace);
        const double i = info_density(x, z, trace, pc);
        dens[b].add(i);
        if (i > threshold) ++hits[b];
      }
    });
    TailPoint pt;
    pt.n = n;
    pt.trials = trials;
    stats::Accumulator all;
    for (std::size_t b = 0; b < blocks; ++b) {
      all.merge(dens[b]);
      pt.hits += hits[b];
    }
    pt.mean_density = all.estimate();
    pt.tail = static_cast<double>(pt.hits) / static_cast<double>(trials);
    pt.interval = stats::clopper_pearson(pt.hits, trials);
    pt.fit_value = pt.hits > 0 ? pt.tail : pt.interval.upper;
    out.points.push_back(pt);
  }

  if (out.points.size() >= 2) {
    std::vector<double> x, y;
    for (const auto& p : out.points) {
      x.push_back(p.n);
      y.push_back(std::log(p.fit_value));
    }
    out.fit_slope = stats::ls_slope(x, y);
  }
  return out;
}

std::vector<std::int64_t> all_messages(const Codebook& cb) {
  std::vector<std::int64_t> w(static_cast<std::size_t>(cb.n_i()));
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = static_cast<std::int64_t>(k);
  return w;
}

LeakageEstimate estimate_variational_distance(const Codebook& cb, const EveTrace& trace, const PowerConfig& pc,
                                              std::span<const std::int64_t> w_subset, std::size_t samples, Rng& rng,
                                              unsigned threads, DistanceMode mode) {
  if (samples == 0 || w_subset.empty()) throw ConfigError("estimate_variational_distance: empty budget");
  for (auto w : w_subset)
    if (w < 0 || w >= cb.n_i()) throw ConfigError("estimate_variational_distance: message out of range");
  const EveImages images(cb, trace);
  const int ne = trace.n_eve();
  const int n = cb.n();
  const double p_prime = pc.eve_output_var();
  const double log_pi = std::log(std::numbers::pi);
  const double dim = static_cast<double>(ne) * n;
  const auto n_j = static_cast<std::size_t>(cb.n_j());

  const std::uint64_t base = rng.next_u64();
  const std::size_t total = w_subset.size() * samples;
  const std::size_t blocks = (total + kBlockSize - 1) / kBlockSize;
  std::vector<stats::Accumulator> partial(blocks);
  std::vector<char> saturated(blocks, 0);
  run_blocks(total, threads, [&](std::size_t b, std::size_t lo, std::size_t hi) {
    auto r = rng.spawn(base, b);
    std::vector<double> terms(n_j);
    for (std::size_t t = lo; t < hi; ++t) {
      const ComplexMat z = complex_gaussian(ne, n, *r, p_prime);
      if (mode == DistanceMode::marginal) {
        partial[b].add(0.0);
        continue;
      }
      const auto w = static_cast<std::size_t>(w_subset[t / samples]);
      const double log_fg = -dim * (log_pi + std::log(p_prime)) - z.squaredNorm() / p_prime;
      for (std::size_t j = 0; j < n_j; ++j) terms[j] = -sq_dist(z, images[w * n_j + j]);
      const double log_fc = -dim * log_pi + stats::log_sum_exp(terms) - std::log(static_cast<double>(n_j));
      const double log_ratio = log_fc - log_fg;
      if (std::abs(log_ratio) > kSaturationLog) saturated[b] = 1;
      partial[b].add(log_ratio >= 0.0 ? 0.0 : -std::expm1(log_ratio));
    }
  });
  stats::Accumulator all;
  LeakageEstimate out;
  for (std::size_t b = 0; b < blocks; ++b) {
    all.merge(partial[b]);
    out.saturated = out.saturated || saturated[b] != 0;
  }
  const auto est = all.estimate();
  out.d_hat = std::clamp(est.mean, 0.0, 1.0);
  out.std_error = est.std_error;
  out.samples = est.count;
  return out;
}

double leakage_from_distance(double d, double w_count) {
  if (!(d >= 0.0 && d <= 1.0)) throw InvariantError("leakage_from_distance: d outside [0,1]");
  if (!(w_count >= 1.0)) throw InvariantError("leakage_from_distance: |W| must be >= 1");
  if (d == 0.0) return 0.0;
  return d * std::log2(w_count / d);
}

stats::Estimate estimate_leakage_mi(const Codebook& cb, const EveTrace& trace, std::size_t samples, Rng& rng,
                                    unsigned threads) {
  if (samples == 0) throw ConfigError("estimate_leakage_mi: samples must be >= 1");
  const EveImages images(cb, trace);
  const auto n_j = static_cast<std::size_t>(cb.n_j());
  const auto n_i = static_cast<std::size_t>(cb.n_i());
  const double log_nj = std::log(static_cast<double>(n_j));
  const double log_all = std::log(static_cast<double>(n_j * n_i));
  return accumulate(samples, rng, threads, [&](Rng& r, std::size_t) {
           const auto w = static_cast<std::size_t>(r.below(n_i));
           const auto j = static_cast<std::size_t>(r.below(n_j));
           const ComplexMat noise = complex_gaussian(cb.n_tx(), cb.n(), r);
           const ComplexMat z = images[w * n_j + j] + eve_observe(noise, trace);
           std::vector<double> terms(images.size());
           for (std::size_t k = 0; k < images.size(); ++k) terms[k] = -sq_dist(z, images[k]);
           const double log_bin =
               stats::log_sum_exp(std::span<const double>(terms).subspan(w * n_j, n_j)) - log_nj;
           const double log_mix = stats::log_sum_exp(terms) - log_all;
           return (log_bin - log_mix) * std::numbers::log2e;
         })
      .estimate();
}

Lemma9Assessment lemma9_assessment(const LeakageEstimate& dist, const stats::Estimate& mi, std::int64_t n_i, int n,
                                   const PowerConfig& pc) {
  Lemma9Assessment out;
  const double tail = 8.0 * std::exp(-n * truncation_exponent(pc.eps_p, pc.n_tx));
  const double raw = 4.0 * dist.d_hat + tail;
  out.d = std::min(1.0, raw);
  const auto w = static_cast<double>(n_i);
  out.bound = leakage_from_distance(out.d, w);
  if (raw < 1.0 && out.d > 0.0)
    out.bound_stderr = std::abs(std::log2(w / out.d) - std::numbers::log2e) * 4.0 * dist.std_error;
  out.mi_hat = mi.mean;
  out.mi_stderr = mi.std_error;
  const double combined = std::hypot(out.mi_stderr, out.bound_stderr);
  out.holds = out.mi_hat <= out.bound + 3.0 * combined;
  return out;
}

stats::Estimate truncation_mass_mc(int n, const PowerConfig& pc, std::size_t samples, Rng& rng, unsigned threads) {
  if (samples == 0 || n < 1) throw ConfigError("truncation_mass_mc: empty budget");
  return accumulate(samples, rng, threads, [&](Rng& r, std::size_t) {
           const ComplexMat x = complex_gaussian(pc.n_tx, n, r, pc.per_antenna_var);
           return x.squaredNorm() / n <= pc.power ? 1.0 : 0.0;
         })
      .estimate();
}

TruncationDistance truncated_vs_gaussian_distance(int n, const PowerConfig& pc, std::size_t samples, Rng& rng,
                                                  unsigned threads) {
  TruncationDistance out;
  out.mu_exact = truncation_mass(n, pc.n_tx, pc.power, pc.eps_p);
  out.surrogate = 4.0 * (1.0 - out.mu_exact);
  const auto mc = truncation_mass_mc(n, pc, samples, rng, threads);
  out.mu_hat = mc.mean;
  out.mc_estimate = 4.0 * (1.0 - mc.mean);
  out.mc_stderr = 4.0 * mc.std_error;
  out.bound = 4.0 * std::exp(-n * truncation_exponent(pc.eps_p, pc.n_tx));
  return out;
}

SecondMomentCheck eve_second_moment_check(const Codebook& cb, const EveTrace& trace, std::size_t trials, Rng& rng,
                                          unsigned threads) {
  if (trials == 0) throw ConfigError("eve_second_moment_check: trials must be >= 1");
  const EveImages images(cb, trace);
  SecondMomentCheck out;
  const double noise_energy = static_cast<double>(cb.n()) * trace.n_eve();
  for (std::size_t k = 0; k < images.size(); ++k) out.expected += images[k].squaredNorm();
  out.expected = out.expected / static_cast<double>(images.size()) + noise_energy;
  out.bound = noise_energy * (cb.power() + 1.0);
  const auto size = static_cast<std::uint64_t>(cb.size());
  const auto est = accumulate(trials, rng, threads, [&](Rng& r, std::size_t) {
                     const auto flat = static_cast<std::size_t>(r.below(size));
                     return eve_observe(transmit(cb.at(flat), r), trace).squaredNorm();
                   }).estimate();
  out.empirical = est.mean;
  out.std_error = est.std_error;
  out.holds = out.empirical <= out.bound + 3.0 * out.std_error;
  return out;
}

SymmetryCheck lemma10_symmetry_check(const BinningParams& bp, const PowerConfig& pc, const EveTrace& trace_a,
                                     const EveTrace& trace_b, std::size_t n_codebooks, std::size_t trials, Rng& rng,
                                     unsigned threads) {
  if (n_codebooks < 2) throw ConfigError("lemma10_symmetry_check: need at least 2 codebooks");
  const std::uint64_t base = rng.next_u64();
  std::vector<double> eta_a, eta_b;
  for (std::size_t k = 0; k < n_codebooks; ++k) {
    auto ra = rng.spawn(base, 2 * k);
    const Codebook ca = sample_codebook(bp, pc, *ra);
    eta_a.push_back(estimate_decode_error(ca, trace_a, trials, *ra, threads).mean);
    auto rb = rng.spawn(base, 2 * k + 1);
    const Codebook cb = sample_codebook(bp, pc, *rb);
    eta_b.push_back(estimate_decode_error(cb, trace_b, trials, *rb, threads).mean);
  }
  SymmetryCheck out;
  out.eta_a = stats::summarize(eta_a);
  out.eta_b = stats::summarize(eta_b);
  out.compatible = std::abs(out.eta_a.mean - out.eta_b.mean) <=
                   3.0 * std::hypot(out.eta_a.std_error, out.eta_b.std_error);
  return out;
}

TwoStageEncoded two_stage_encode(std::int64_t w, std::span<const Codebook> books, double r0, Rng& rng) {
  if (books.empty()) throw ConfigError("two_stage_encode: no codebooks");
  if (!(r0 > 0.0)) throw ConfigError("two_stage_encode: R0 must be positive");
  TwoStageEncoded out;
  out.k = books.size() == 1 ? 0 : static_cast<std::size_t>(rng.below(books.size()));
  const auto enc = encode(w, books[out.k], rng);
  out.j = enc.j;
  out.codeword = enc.codeword;
  out.n2 = static_cast<int>(std::ceil(std::log2(static_cast<double>(books.size())) / r0));
  return out;
}

TwoStageDistance two_stage_distance(std::span<const Codebook> books, const EveTrace& trace, const PowerConfig& pc,
                                    std::size_t samples, Rng& rng, unsigned threads) {
  if (books.empty()) throw ConfigError("two_stage_distance: no codebooks");
  TwoStageDistance out;
  const std::uint64_t base = rng.next_u64();
  double var = 0.0;
  for (std::size_t k = 0; k < books.size(); ++k) {
    auto r = rng.spawn(base, k);
    const auto msgs = all_messages(books[k]);
    out.per_book.push_back(estimate_variational_distance(books[k], trace, pc, msgs, samples, *r, threads));
    out.mean += out.per_book.back().d_hat;
    var += out.per_book.back().std_error * out.per_book.back().std_error;
  }
  const auto kk = static_cast<double>(books.size());
  out.mean /= kk;
  out.std_error = std::sqrt(var) / kk;
  return out;
}

}  // namespace wiretap
