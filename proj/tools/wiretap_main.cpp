#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "wiretap/cli/commands.hpp"
#include "wiretap/errors.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string convention = "full";
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file")->required()->envname("WIRETAP_CONFIG");
  sub->add_option("--seed", f.seed, "master seed (required for simulate and verify)")->envname("WIRETAP_SEED");
  sub->add_option("--out", f.out, "CSV output path (default stdout)")->envname("WIRETAP_OUT");
  sub->add_option("--threads", f.threads, "worker threads")->check(CLI::Range(1u, 1024u))->envname("WIRETAP_THREADS");
  sub->add_option("--convention", f.convention, "capacity convention")
      ->check(CLI::IsMember({"full", "half"}))
      ->envname("WIRETAP_CONVENTION");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MIMO wiretap secrecy rates and toy-scale coding experiments"};
  app.require_subcommand(1);
  Flags flags;
  for (const char* name : {"rate", "region", "simulate", "verify", "schedule"}) {
    auto* sub = app.add_subcommand(name);
    add_flags(sub, flags);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : wiretap::cli::kConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  wiretap::cli::RunConfig cfg;
  try {
    cfg = wiretap::cli::load_config(command, flags.config);
    cfg.convention = wiretap::cli::parse_convention(flags.convention);
  } catch (const wiretap::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return wiretap::cli::kConfigError;
  }
  if (flags.seed) cfg.seed = flags.seed;
  cfg.threads = flags.threads;
  cfg.output_path = flags.out;
  return wiretap::cli::execute(cfg, std::cout, std::cerr);
}
