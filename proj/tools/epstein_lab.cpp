// epstein_lab: command-line front end. Flags map one-to-one onto config keys
// and are applied after --config, so flags win.

#include "epstein/cli_runner.hpp"
#include "epstein/errors.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace {

struct Flag {
  const char* name;  // without leading dashes
  const char* key;   // config key
  const char* help;
};

const Flag kFlags[] = {
    {"n", "n", "lattice dimension"},
    {"k", "k", "highest moment order"},
    {"trials", "trials", "number of trials (lattices for curves)"},
    {"poisson-trials", "poisson_trials", "Poisson trials for curves"},
    {"c", "c", "exponent c; repeat or comma-separate for a grid"},
    {"delta", "delta", "truncation volume"},
    {"horizon", "horizon", "Poisson simulation horizon"},
    {"seed", "seed", "master seed (generated and recorded if absent)"},
    {"cutoff-volume", "cutoff_volume", "enumeration cutoff volume (window for curves)"},
    {"prime-bits", "prime_bits", "bit length of the Hecke prime"},
    {"tol", "tol", "quadrature relative tolerance"},
    {"n-list", "n_list", "comma-separated dimensions for bounds"},
    {"exponents", "exponents", "3 or 4 comma-separated exponents for bounds"},
    {"profile", "profile", "acceptance profile: desk or quick"},
    {"input", "input", "lattice-sim JSONL to evaluate"},
};

const std::map<std::string, std::vector<std::string>> kSubcommandFlags = {
    {"moments", {"k", "c", "delta"}},
    {"poisson-sim", {"trials", "c", "delta", "horizon", "seed"}},
    {"lattice-sim", {"n", "trials", "cutoff-volume", "prime-bits", "seed"}},
    {"zeta-eval", {"input", "c", "delta"}},
    {"bounds", {"n-list", "c", "delta", "exponents", "tol"}},
    {"verify", {"profile"}},
    {"curves", {"n", "trials", "poisson-trials", "c", "delta", "cutoff-volume", "prime-bits", "seed"}},
};

const Flag& flag(const std::string& name) {
  for (const auto& f : kFlags)
    if (name == f.name) return f;
  throw std::logic_error("unknown flag " + name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Epstein zeta statistics lab: random lattices, Poisson limits, moment formulas"};
  app.set_version_flag("--version", epstein::version());
  app.require_subcommand(1);

  std::string config_file, out_dir, workers, manifest;
  std::map<std::string, std::vector<std::string>> values;
  std::map<std::string, CLI::App*> subs;

  for (const auto& [name, flags] : kSubcommandFlags) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_file, "key=value config file; flags override it")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (default $EPSTEIN_LAB_OUT or .)");
    sub->add_option("--workers", workers, "worker threads (0 = all cores)");
    for (const auto& fl : flags) {
      const auto& f = flag(fl);
      auto* opt = sub->add_option(std::string("--") + f.name, values[f.key], f.help);
      if (std::string(f.key) != "c") opt->expected(1);
    }
    subs[name] = sub;
  }
  auto* rep = app.add_subcommand("replay", "re-run a manifest and compare output digests");
  rep->add_option("--manifest", manifest, "manifest written by an earlier run")->required()->check(CLI::ExistingFile);
  rep->add_option("--out", out_dir, "fresh output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : epstein::kExitConfigError;
  }

  if (rep->parsed()) return epstein::replay(manifest, out_dir, std::cerr);

  epstein::ExperimentConfig cfg;
  try {
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      std::ostringstream buf;
      buf << in.rdbuf();
      cfg = epstein::ExperimentConfig::parse(buf.str());
    }
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) cfg.subcommand = name;
    for (const auto& [key, v] : values) {
      if (v.empty()) continue;
      std::string joined;
      for (std::size_t i = 0; i < v.size(); ++i) joined += (i ? "," : "") + v[i];
      cfg.set(key, joined);
    }
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (!workers.empty()) cfg.set("workers", workers);
  } catch (const epstein::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return epstein::kExitConfigError;
  }
  return epstein::run(cfg, std::cerr);
}
