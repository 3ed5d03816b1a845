#include "wiretap/cli/verify.hpp"

#include <cmath>

#include "wiretap/errors.hpp"
#include "wiretap/estimators.hpp"
#include "wiretap/quantization.hpp"

namespace wiretap::cli {

namespace {

struct Check {
  std::string id;
  std::string anchor;
  double observed = 0.0;
  double bound = 0.0;
  bool pass = false;
};

ComplexMat eye(Eigen::Index n) { return ComplexMat::Identity(n, n); }

Check noise_whiteness(const std::optional<ComplexMat>& injected, Rng& rng) {
  Check c{"noise_whiteness", "artificial noise through any canonical state has identity covariance", 0.0, 0.05, false};
  const int samples = 100000;
  for (int k = 0; k < 10; ++k) {
    const ComplexMat h = injected ? *injected : random_canonical_state(2, 3, rng).matrix();
    const ComplexMat hn = h * complex_gaussian(h.cols(), samples, rng);
    const ComplexMat cov = hn * hn.adjoint() / static_cast<double>(samples);
    c.observed = std::max(c.observed, max_abs_diff(cov, eye(h.rows())));
  }
  c.pass = c.observed <= c.bound;
  return c;
}

Check output_invariance(Rng& rng) {
  Check c{"output_invariance", "eavesdropper output law is the same for every canonical state (z-score of power gap)",
          0.0, 3.0, false};
  const int m = 100000;
  const double var = 3.0;
  double power[2];
  for (double& pw : power) {
    const auto st = random_canonical_state(1, 2, rng);
    const ComplexMat y = st.matrix() * transmit(complex_gaussian(2, m, rng, var), rng);
    pw = y.squaredNorm() / m;
  }
  const double se = std::sqrt(2.0) * (var + 1.0) / std::sqrt(static_cast<double>(m));
  c.observed = std::abs(power[0] - power[1]) / se;
  c.pass = c.observed <= c.bound;
  return c;
}

Check quantization_error(Rng& rng) {
  const int m = 10, nt = 3;
  Check c{"quantization_error", "per-row quantization error below 2 N_T / M^2", 0.0, 2.0 * nt / (m * m), false};
  for (int k = 0; k < 10000; ++k) {
    const auto st = random_canonical_state(2, nt, rng);
    const ComplexMat q = quantize_eve(st, m);
    for (Eigen::Index r = 0; r < q.rows(); ++r)
      c.observed = std::max(c.observed, (q.row(r) - st.matrix().row(r)).squaredNorm());
  }
  c.pass = c.observed < c.bound;
  return c;
}

Check loglik_perturbation(Rng& rng) {
  Check c{"loglik_perturbation", "log-likelihood gap between nearby states at most n g(r, r') (worst ratio)", 0.0, 1.0,
          false};
  const int n = 8, nt = 2;
  const double power = 8.0, m = 100.0;
  const Complex i(0.0, 1.0);
  int applicable = 0;
  for (int k = 0; k < 2000; ++k) {
    const auto a = random_canonical_trace(1, nt, n, rng);
    std::vector<EveState> bs;
    for (const auto& st : a.states()) {
      const ComplexMat g = complex_gaussian(nt, nt, rng, 0.25 / (m * m));
      const ComplexMat herm = 0.5 * (g + g.adjoint());
      const ComplexMat u = (eye(nt) - 0.5 * i * herm).inverse() * (eye(nt) + 0.5 * i * herm);
      bs.emplace_back(st.matrix() * u);
    }
    ComplexMat x;
    do {
      x = complex_gaussian(nt, n, rng, power / nt);
    } while (x.squaredNorm() / n > power);
    const ComplexMat z = eve_observe(x, a) + complex_gaussian(1, n, rng);
    const auto r = check_loglik_perturbation(x, z, a, EveTrace(bs), power, m, 0.1);
    if (r.status == CheckStatus::not_applicable) continue;
    ++applicable;
    c.observed = std::max(c.observed, r.lhs / r.rhs);
  }
  c.pass = applicable > 0 && c.observed <= c.bound;
  return c;
}

Check second_moment(Rng& rng) {
  const auto pc = PowerConfig::from_power(4.0, 0.2, 2, 2);
  const Codebook cb = sample_codebook(BinningParams::with_counts(6, 4, 8), pc, rng);
  const auto trace = random_canonical_trace(1, 2, 6, rng);
  const auto r = eve_second_moment_check(cb, trace, 20000, rng);
  return {"second_moment", "eavesdropper output energy at most n N_E (P + 1) (minus 3 stderr)",
          r.empirical - 3.0 * r.std_error, r.bound, r.holds};
}

Check truncation_distance(Rng& rng) {
  const auto pc = PowerConfig::from_power(4.0, 0.3, 2, 2);
  const auto r = truncated_vs_gaussian_distance(50, pc, 20000, rng);
  return {"truncation_distance", "truncated-input output distance surrogate 4(1 - mu) below 4 e^{-n alpha(eps_P)}",
          r.surrogate, r.bound, r.surrogate <= r.bound && r.mc_estimate <= r.bound + 3.0 * r.mc_stderr};
}

Check info_stability(Rng& rng) {
  const auto pc = PowerConfig::from_power(32.0, 0.0, 2, 2);
  const std::vector<int> ns{50, 100, 200};
  const auto r = info_density_tail(ns, 0.5, pc, 1, random_trace_factory(1, 2), 20000, rng);
  bool decreasing = true;
  for (std::size_t k = 1; k < r.points.size(); ++k)
    decreasing = decreasing && r.points[k].fit_value < r.points[k - 1].fit_value;
  return {"info_stability", "information density tail decays at least at the Chernoff rate (ln-tail slope)",
          r.fit_slope, -r.chernoff_floor, decreasing && r.fit_slope <= -r.chernoff_floor};
}

Check lemma10(Rng& rng) {
  const auto pc = PowerConfig::from_power(8.0, 0.0, 2, 2);
  const auto bp = BinningParams::with_counts(4, 2, 8, SecrecyMode::weak);
  const auto a = random_canonical_trace(1, 2, 4, rng);
  const auto b = random_canonical_trace(1, 2, 4, rng);
  const auto r = lemma10_symmetry_check(bp, pc, a, b, 10, 400, rng);
  return {"lemma10_symmetry", "codebook-averaged eavesdropper decoding error is state independent",
          std::abs(r.eta_a.mean - r.eta_b.mean), 3.0 * std::hypot(r.eta_a.std_error, r.eta_b.std_error),
          r.compatible};
}

Check union_bound_decay() {
  Check c{"union_bound_decay", "log(|S_M| e^{-eps_n K}) decreasing once the exponential term dominates (max step)",
          -std::numeric_limits<double>::infinity(), 0.0, false};
  for (int n = 2050; n <= 3000; n += 50)
    c.observed = std::max(c.observed,
                          schedule_log_union_bound(0.01, n, 2, 1) - schedule_log_union_bound(0.01, n - 50, 2, 1));
  c.pass = c.observed < c.bound;
  return c;
}

}  // namespace

ResultTable verify_suite(const RunConfig& cfg, bool& all_pass) {
  const std::uint64_t seed = cfg.require_seed();
  std::optional<ComplexMat> injected;
  if (cfg.params.contains("inject_eve")) injected = parse_matrix(cfg.params["inject_eve"], "inject_eve");
  const SeededRng master(seed);
  auto stream = [&](std::uint64_t k) { return master.spawn(seed, k); };

  std::vector<Check> checks;
  checks.push_back(noise_whiteness(injected, *stream(0)));
  checks.push_back(output_invariance(*stream(1)));
  checks.push_back(quantization_error(*stream(2)));
  checks.push_back(loglik_perturbation(*stream(3)));
  checks.push_back(second_moment(*stream(4)));
  checks.push_back(truncation_distance(*stream(5)));
  checks.push_back(info_stability(*stream(6)));
  checks.push_back(lemma10(*stream(7)));
  checks.push_back(union_bound_decay());

  ResultTable t({"check_id", "anchor", "observed", "bound", "pass"});
  all_pass = true;
  for (const auto& c : checks) {
    t.add_row({c.id, c.anchor, c.observed, c.bound, c.pass});
    all_pass = all_pass && c.pass;
  }
  return t;
}

}  // namespace wiretap::cli
