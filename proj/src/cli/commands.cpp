#include "wiretap/cli/commands.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "wiretap/cli/verify.hpp"
#include "wiretap/errors.hpp"
#include "wiretap/estimators.hpp"
#include "wiretap/quantization.hpp"
#include "wiretap/rates.hpp"

namespace wiretap::cli {

using nlohmann::json;

namespace {

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

SecrecyMode parse_mode(const json& p) {
  const std::string m = p.value("mode", std::string("strong"));
  if (m == "strong") return SecrecyMode::strong;
  if (m == "weak") return SecrecyMode::weak;
  throw ConfigError("config: mode must be 'strong' or 'weak'");
}

std::size_t get_budget(const json& p, const char* key, std::size_t fallback) {
  if (!p.contains(key)) return fallback;
  if (!p[key].is_number_integer() || p[key].get<long long>() < 0)
    throw ConfigError(std::string("config: '") + key + "' must be a non-negative integer");
  const auto v = p[key].get<std::size_t>();
  if (v == 0) throw ConfigError(std::string("config: '") + key + "' is zero; nothing to estimate");
  return v;
}

}  // namespace

CommandResult cmd_rate(const RunConfig& cfg) {
  const auto& p = cfg.params;
  const MainChannel ch(parse_matrix(p.at("channel"), "channel"));
  const int n_eve = get_int(p, "n_eve");
  const double eps_p = get_double(p, "eps_p", 0.0);
  ResultTable t({"pbar", "power", "main_mi", "leakage_cap", "secrecy_rate", "converse_bound", "clamped"});
  for (double pbar : get_doubles(p, "pbar")) {
    const auto pc = PowerConfig::make(pbar, eps_p, ch.n_modes(), ch.n_tx());
    const auto r = secrecy_rate(ch, pc, n_eve, cfg.convention);
    t.add_row({pbar, pc.power, r.main_mi, r.leakage_cap, r.rate_bits,
               converse_rate_bound(ch, pbar, n_eve, cfg.convention), r.clamped});
  }
  t.set_meta("sdof", std::to_string(sdof(ch.n_tx(), ch.n_rx(), n_eve)));
  return {std::move(t), kOk};
}

CommandResult cmd_region(const RunConfig& cfg) {
  const auto& p = cfg.params;
  const std::string model = p.value("model", std::string());
  const MainChannel ch1(parse_matrix(p.at("channel1"), "channel1"));
  const MainChannel ch2(parse_matrix(p.at("channel2"), "channel2"));
  const double pbar = get_double(p, "pbar");
  const int n_eve = get_int(p, "n_eve");
  RateRegion region;
  if (model == "mac") {
    const auto grid = p.contains("alpha_grid") ? get_doubles(p, "alpha_grid") : default_alpha_grid();
    region = mac_region(ch1, ch2, pbar, n_eve, grid, cfg.convention);
  } else if (model == "bc") {
    region = bc_region(ch1, ch2, pbar, n_eve, cfg.convention);
  } else {
    throw ConfigError("config: model must be 'mac' or 'bc'");
  }

  ResultTable t({"source", "alpha", "r1", "r2", "hull", "hull_order"});
  auto hull_position = [&](const RatePoint& q) -> std::int64_t {
    for (std::size_t k = 0; k < region.hull.size(); ++k)
      if (region.hull[k].r1 == q.r1 && region.hull[k].r2 == q.r2) return static_cast<std::int64_t>(k);
    return -1;
  };
  for (std::size_t i = 0; i < region.raw_points.size(); ++i) {
    const auto& q = region.raw_points[i];
    const Cell alpha = region.alphas.empty() ? Cell(std::string()) : Cell(region.alphas[i]);
    const auto pos = hull_position(q);
    t.add_row({std::string("raw"), alpha, q.r1, q.r2, pos >= 0, pos});
  }
  for (std::size_t k = 0; k < region.hull.size(); ++k)
    t.add_row({std::string("hull"), std::string(), region.hull[k].r1, region.hull[k].r2, true,
               static_cast<std::int64_t>(k)});
  t.set_meta("model", model);
  t.set_meta("max_sum_rate", format_double(max_sum_rate(region.hull)));
  return {std::move(t), kOk};
}

CommandResult cmd_simulate(const RunConfig& cfg) {
  const auto& p = cfg.params;
  const std::uint64_t seed = cfg.require_seed();
  const MainChannel ch(parse_matrix(p.at("channel"), "channel"));
  const int n_eve = get_int(p, "n_eve", 1);
  const double eps_p = get_double(p, "eps_p", 0.0);
  const PowerConfig pc = p.contains("power")
                             ? PowerConfig::from_power(get_double(p, "power"), eps_p, ch.n_modes(), ch.n_tx())
                             : PowerConfig::make(get_double(p, "pbar"), eps_p, ch.n_modes(), ch.n_tx());
  const auto ns = get_ints(p, "ns");
  const double delta_n = get_double(p, "delta_n");
  const double delta_prime = get_double(p, "delta_prime", 0.0);
  const SecrecyMode mode = parse_mode(p);
  const std::size_t codebooks = get_budget(p, "codebooks", 4);
  const std::size_t trials = get_budget(p, "trials", 1000);
  const std::size_t samples = get_budget(p, "samples", 2000);
  ToyScaleLimits limits;
  if (p.contains("limits")) {
    limits.max_codewords = p["limits"].value("max_codewords", limits.max_codewords);
    limits.max_n = p["limits"].value("max_n", limits.max_n);
  }
  std::optional<EveState> fixed_eve;
  if (p.contains("eve")) fixed_eve = canonicalize_eve(parse_matrix(p["eve"], "eve"));
  if (fixed_eve && fixed_eve->n_eve() != n_eve) throw ConfigError("config: 'eve' must have n_eve rows");

  const double i_main = main_mutual_info(ch, pc);
  const double i_eve = leakage_cap(pc, n_eve, LeakageMode::exact);

  ResultTable t({"n", "n_i", "n_j", "rate", "lambda_hat", "lambda_se", "eta_hat", "eta_se", "d_hat", "d_se", "mi_hat",
                 "mi_se", "lemma9_bound", "lemma9_holds"});

  // Validate every blocklength before spending any Monte Carlo time.
  std::vector<BinningParams> plans;
  for (int n : ns) {
    auto bp = binning_params(i_main, i_eve, n, delta_n, delta_prime, mode);
    if (p.contains("n_i")) bp.n_i = get_int(p, "n_i");
    if (bp.n_i < 1) throw ConfigError("config: n_i must be >= 1");
    enforce_limits(bp, limits);
    plans.push_back(bp);
  }

  const SeededRng master(seed);
  for (std::size_t k = 0; k < plans.size(); ++k) {
    const auto& bp = plans[k];
    std::vector<double> lam, eta, dist, mi, bound;
    bool holds = true;
    for (std::size_t c = 0; c < codebooks; ++c) {
      auto rng = master.spawn(seed, k * codebooks + c);
      const Codebook cb = sample_codebook(bp, pc, *rng, limits);
      const EveTrace trace = fixed_eve ? EveTrace::constant(*fixed_eve, static_cast<std::size_t>(bp.n))
                                       : random_canonical_trace(n_eve, ch.n_tx(), static_cast<std::size_t>(bp.n), *rng);
      lam.push_back(estimate_decode_error(cb, ch, trials, *rng, cfg.threads).mean);
      eta.push_back(estimate_decode_error(cb, trace, trials, *rng, cfg.threads).mean);
      const auto d = estimate_variational_distance(cb, trace, pc, all_messages(cb), samples, *rng, cfg.threads);
      const auto m = estimate_leakage_mi(cb, trace, samples, *rng, cfg.threads);
      const auto l9 = lemma9_assessment(d, m, cb.n_i(), bp.n, pc);
      dist.push_back(d.d_hat);
      mi.push_back(m.mean);
      bound.push_back(l9.bound);
      holds = holds && l9.holds;
    }
    auto summary = [](const std::vector<double>& v) {
      return v.size() > 1 ? stats::summarize(v) : stats::Estimate{v[0], 0.0, 1};
    };
    const auto sl = summary(lam), se = summary(eta), sd = summary(dist), sm = summary(mi), sb = summary(bound);
    t.add_row({static_cast<std::int64_t>(bp.n), bp.n_i, bp.n_j, bp.rate, sl.mean, sl.std_error, se.mean, se.std_error,
               sd.mean, sd.std_error, sm.mean, sm.std_error, sb.mean, holds});
  }
  t.set_meta("i_main", format_double(i_main));
  t.set_meta("i_eve", format_double(i_eve));
  return {std::move(t), kOk};
}

CommandResult cmd_verify(const RunConfig& cfg) {
  bool all_pass = true;
  ResultTable t = verify_suite(cfg, all_pass);
  return {std::move(t), all_pass ? kOk : kVerifyFailed};
}

CommandResult cmd_schedule(const RunConfig& cfg) {
  const auto& p = cfg.params;
  ScheduleInputs base;
  base.c_prime = get_double(p, "c_prime");
  base.e_val = get_double(p, "e_val");
  base.power = get_double(p, "power", 1.0);
  base.n_tx = get_int(p, "n_tx", 1);
  base.n_eve = get_int(p, "n_eve", 1);
  base.eps = get_double(p, "eps", 0.1);
  base.alpha_eps = get_double(p, "alpha_eps", chernoff_exponent(base.eps, TailSide::upper));
  base.alpha_eps_p = p.contains("alpha_eps_p") ? get_double(p, "alpha_eps_p")
                                                : truncation_exponent(get_double(p, "eps_p"), base.n_tx);
  const double r0 = get_double(p, "r0", 1.0);

  ResultTable t({"eps_prime", "n", "eps_n", "log_k", "log_m", "rate_below_c_prime", "rate_below_alpha_eps",
                 "rate_below_alpha_eps_p", "double_rate_below_e", "selection_holds", "grid_holds",
                 "continuity_holds", "min_n_selection", "min_n_grid", "min_n_continuity", "c_factor", "n2_per_n",
                 "log_union_bound"});
  auto opt = [](const std::optional<std::int64_t>& v) { return v ? Cell(*v) : Cell(std::string("none")); };
  for (double ep : get_doubles(p, "eps_prime")) {
    for (int n : get_ints(p, "n")) {
      ScheduleInputs in = base;
      in.eps_prime = ep;
      in.n = n;
      const auto s = schedule_params(in);
      const auto o = two_stage_overhead(ep, r0);
      t.add_row({ep, static_cast<std::int64_t>(n), s.eps_n, s.log_k, s.log_m, s.rate_below_c_prime,
                 s.rate_below_alpha_eps, s.rate_below_alpha_eps_p, s.double_rate_below_e, s.selection_holds,
                 s.grid_holds, s.continuity_holds, opt(s.min_n_selection), opt(s.min_n_grid),
                 opt(s.min_n_continuity), o.c_factor, o.n2_per_n,
                 schedule_log_union_bound(ep, n, base.n_tx, base.n_eve)});
    }
  }
  return {std::move(t), kOk};
}

CommandResult run_command(const RunConfig& cfg) {
  CommandResult res{ResultTable({}), kOk};
  if (cfg.command == "rate") {
    res = cmd_rate(cfg);
  } else if (cfg.command == "region") {
    res = cmd_region(cfg);
  } else if (cfg.command == "simulate") {
    res = cmd_simulate(cfg);
  } else if (cfg.command == "verify") {
    res = cmd_verify(cfg);
  } else if (cfg.command == "schedule") {
    res = cmd_schedule(cfg);
  } else {
    throw ConfigError("unknown command '" + cfg.command + "'");
  }
  // Header first, command-specific metadata after it.
  ResultTable stamped(res.table.columns());
  stamped.set_meta("wiretap", kVersion);
  stamped.set_meta("command", cfg.command);
  stamped.set_meta("config_hash", hex64(config_hash(cfg)));
  stamped.set_meta("seed", cfg.seed ? std::to_string(*cfg.seed) : std::string("none"));
  stamped.set_meta("convention", convention_name(cfg.convention));
  for (const auto& [k, v] : res.table.meta()) stamped.set_meta(k, v);
  for (const auto& row : res.table.rows()) stamped.add_row(row);
  return {std::move(stamped), res.exit_code};
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const auto res = run_command(cfg);
    if (cfg.output_path.empty()) {
      res.table.write_csv(out);
    } else {
      std::ofstream f(cfg.output_path, std::ios::binary);
      if (!f) throw ConfigError("cannot write " + cfg.output_path);
      res.table.write_csv(f);
    }
    if (res.exit_code == kVerifyFailed) err << "verify: one or more checks failed\n";
    return res.exit_code;
  } catch (const CapError& e) {
    err << "refused: " << e.what() << '\n';
    return kCapRefused;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: config: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace wiretap::cli
