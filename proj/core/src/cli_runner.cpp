#include "epstein/cli_runner.hpp"

#include "epstein/acceptance.hpp"
#include "epstein/analytic_moments.hpp"
#include "epstein/bounds_lab.hpp"
#include "epstein/errors.hpp"
#include "epstein/lattice_model.hpp"
#include "epstein/poisson_model.hpp"
#include "epstein/zeta_eval.hpp"

#include "json.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

namespace epstein {

namespace fs = std::filesystem;
using nlohmann::json;

#ifndef EPSTEIN_VERSION
#define EPSTEIN_VERSION "unknown"
#endif

std::string version() { return EPSTEIN_VERSION; }

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = v.find(',');
    out.push_back(trim(v.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    v.remove_prefix(pos + 1);
  }
  return out;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* why) {
  throw ConfigError("config key '" + std::string(key) + "': bad value '" + std::string(value) + "' (" + why + ")");
}

double to_double(std::string_view key, std::string_view v) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(x)) bad_value(key, v, "expected a real number");
  return x;
}

template <class Int>
Int to_int(std::string_view key, std::string_view v) {
  Int x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty()) bad_value(key, v, "expected an integer");
  return x;
}

std::string fmt_double(double x) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

template <class T, class F>
std::string join(const std::vector<T>& v, F f) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + f(v[i]);
  return s;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

void ExperimentConfig::set(std::string_view key, std::string_view raw) {
  const std::string_view v = trim(raw);
  if (key == "subcommand") {
    subcommand = std::string(v);
  } else if (key == "n") {
    n = to_int<int>(key, v);
  } else if (key == "k") {
    k = to_int<int>(key, v);
  } else if (key == "trials") {
    trials = to_int<std::uint64_t>(key, v);
  } else if (key == "poisson_trials") {
    poisson_trials = to_int<std::uint64_t>(key, v);
  } else if (key == "c") {
    c_list.clear();
    for (auto e : split_list(v)) c_list.push_back(to_double(key, e));
  } else if (key == "delta") {
    delta = to_double(key, v);
  } else if (key == "horizon") {
    horizon = to_double(key, v);
  } else if (key == "seed") {
    seed = to_int<std::uint64_t>(key, v);
  } else if (key == "cutoff_volume") {
    cutoff_volume = to_double(key, v);
  } else if (key == "prime_bits") {
    prime_bits = to_int<int>(key, v);
  } else if (key == "tol") {
    tol = to_double(key, v);
  } else if (key == "n_list") {
    n_list.clear();
    for (auto e : split_list(v)) n_list.push_back(to_int<int>(key, e));
  } else if (key == "exponents") {
    exponents.clear();
    for (auto e : split_list(v)) exponents.push_back(to_int<int>(key, e));
  } else if (key == "profile") {
    profile = std::string(v);
  } else if (key == "input") {
    input = std::string(v);
  } else if (key == "output_dir") {
    output_dir = std::string(v);
  } else if (key == "workers") {
    workers = to_int<int>(key, v);
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

std::string ExperimentConfig::serialize() const {
  std::ostringstream s;
  s << "subcommand=" << subcommand << "\n"
    << "n=" << n << "\n"
    << "k=" << k << "\n"
    << "trials=" << trials << "\n"
    << "poisson_trials=" << poisson_trials << "\n"
    << "c=" << join(c_list, fmt_double) << "\n"
    << "delta=" << fmt_double(delta) << "\n"
    << "horizon=" << fmt_double(horizon) << "\n";
  if (seed) s << "seed=" << *seed << "\n";
  s << "cutoff_volume=" << fmt_double(cutoff_volume) << "\n"
    << "prime_bits=" << prime_bits << "\n"
    << "tol=" << fmt_double(tol) << "\n"
    << "n_list=" << join(n_list, [](int x) { return std::to_string(x); }) << "\n"
    << "exponents=" << join(exponents, [](int x) { return std::to_string(x); }) << "\n"
    << "profile=" << profile << "\n"
    << "input=" << input << "\n"
    << "output_dir=" << output_dir << "\n"
    << "workers=" << workers << "\n";
  return s.str();
}

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
  ExperimentConfig cfg;
  std::size_t lineno = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineno;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return cfg;
}

void ExperimentConfig::validate() const {
  require(std::find(std::begin(kSubcommands), std::end(kSubcommands), subcommand) != std::end(kSubcommands),
          "unknown subcommand '" + subcommand + "'");
  require(n >= 2 && n <= 64, "n must be in [2, 64]");
  require(k >= 1 && k <= kMaxPartitionSize, "k must be in [1, 12]");
  require(trials >= 1 && trials <= 1'000'000'000ULL, "trials must be in [1, 1e9]");
  require(poisson_trials >= 1 && poisson_trials <= 1'000'000'000ULL, "poisson_trials must be in [1, 1e9]");
  require(!c_list.empty() && c_list.size() <= 64, "c must list 1..64 values");
  for (std::size_t i = 0; i < c_list.size(); ++i) {
    require(c_list[i] > 0.5 && c_list[i] <= 64.0, "every c must be in (1/2, 64]");
    if (i) require(c_list[i] > c_list[i - 1], "c values must be strictly increasing");
  }
  require(delta >= 0.0, "delta must be >= 0");
  if (subcommand != "zeta-eval") require(delta > 0.0, "delta must be > 0");
  require(horizon > 0.0, "horizon must be > 0");
  if (subcommand == "poisson-sim") require(horizon > delta, "horizon must exceed delta");
  require(cutoff_volume > 0.0, "cutoff_volume must be > 0");
  if (subcommand == "curves") {
    require(cutoff_volume > delta, "cutoff_volume must exceed delta");
    require(c_list.size() >= 3, "curves needs at least 3 values of c");
  }
  require(prime_bits >= 20 && prime_bits <= 62, "prime_bits must be in [20, 62]");
  require(tol > 0.0, "tol must be > 0");
  require(!n_list.empty(), "n_list must be nonempty");
  for (int x : n_list) require(x >= 2 && x <= 200, "n_list entries must be in [2, 200]");
  require(exponents.size() == 3 || exponents.size() == 4, "exponents must have 3 or 4 entries");
  for (int e : exponents) require(e >= 1 && e <= 8, "exponents must be in [1, 8]");
  require(profile == "desk" || profile == "quick", "profile must be desk or quick");
  if (subcommand == "zeta-eval") require(!input.empty(), "zeta-eval needs input (lattice-sim JSONL)");
  require(workers >= 0 && workers <= 1024, "workers must be in [0, 1024]");
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw InternalError("sha256: digest failed");
  std::ostringstream s;
  for (unsigned i = 0; i < len; ++i) s << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return s.str();
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

std::string RunManifest::to_json() const {
  json j;
  j["code_version"] = code_version;
  j["timestamp"] = timestamp;
  j["config"] = config.serialize();
  j["seed_rule"] = seed_rule;
  j["master_seed"] = master_seed;
  j["seed_generated"] = seed_generated;
  j["trial_count"] = trial_count;
  j["outputs"] = output_digests;
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(std::string_view text) {
  RunManifest m;
  try {
    const json j = json::parse(text);
    m.config = ExperimentConfig::parse(j.at("config").get<std::string>());
    m.code_version = j.at("code_version").get<std::string>();
    m.timestamp = j.at("timestamp").get<std::string>();
    m.seed_rule = j.at("seed_rule").get<std::string>();
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    m.seed_generated = j.value("seed_generated", false);
    m.trial_count = j.at("trial_count").get<std::uint64_t>();
    m.output_digests = j.at("outputs").get<std::map<std::string, std::string>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

fs::path default_output_dir() {
  const char* env = std::getenv("EPSTEIN_LAB_OUT");
  return env && *env ? fs::path(env) : fs::path(".");
}

namespace {

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Digest of the parameters that determine the outputs.
std::string config_digest(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  c.output_dir.clear();
  c.input.clear();
  c.workers = 0;
  return sha256_hex(c.serialize());
}

struct Outputs {
  fs::path dir;
  std::string manifest_name;
  std::string digest;
  std::vector<std::string> files;

  std::ofstream open(const std::string& name) {
    files.push_back(name);
    std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write " + (dir / name).string());
    return f;
  }
  std::ofstream jsonl(const std::string& name) {
    auto f = open(name);
    f << json{{"manifest", manifest_name}, {"config_sha256", digest}}.dump() << "\n";
    return f;
  }
  std::ofstream csv(const std::string& name) {
    auto f = open(name);
    f << "# manifest=" << manifest_name << " config_sha256=" << digest << "\n";
    return f;
  }
};

int run_moments(const ExperimentConfig& cfg, Outputs& out, std::ostream& log) {
  auto f = out.csv("moments.csv");
  f << "k,c,delta,poisson_moment,limit_moment,abs_diff\n";
  double worst = 0.0;
  for (double c : cfg.c_list)
    for (int k = 1; k <= cfg.k; ++k) {
      const double p = poisson_moment(k, c, cfg.delta), l = limit_moment(k, c, cfg.delta);
      const double d = std::abs(p - l);
      worst = std::max(worst, d / std::abs(p));
      f << k << "," << fmt_double(c) << "," << fmt_double(cfg.delta) << "," << fmt_double(p) << "," << fmt_double(l)
        << "," << fmt_double(d) << "\n";
    }
  log << "moments: " << cfg.k * cfg.c_list.size() << " rows, max relative difference " << worst << "\n";
  return kExitPass;
}

int run_poisson(const ExperimentConfig& cfg, Outputs& out, std::ostream& log) {
  const std::size_t g = cfg.c_list.size();
  std::vector<double> values(cfg.trials * g);
  parallel_for(cfg.trials, cfg.workers, [&](std::uint64_t i) {
    stream_truncated(cfg.horizon, trial_seed(*cfg.seed, i), cfg.c_list, cfg.delta, std::span(&values[i * g], g));
  });
  auto f = out.jsonl("poisson-sim.jsonl");
  std::vector<double> sums(g, 0.0);
  for (std::uint64_t i = 0; i < cfg.trials; ++i)
    for (std::size_t j = 0; j < g; ++j) {
      const double v = values[i * g + j];
      sums[j] += v;
      f << json{{"trial", i},
                {"seed", trial_seed(*cfg.seed, i)},
                {"c", cfg.c_list[j]},
                {"delta", cfg.delta},
                {"value", v},
                {"tail_estimate", tail_mean(cfg.c_list[j], cfg.horizon)}}
               .dump()
        << "\n";
    }
  for (std::size_t j = 0; j < g; ++j) {
    const double c = cfg.c_list[j];
    const double ref = poisson_moment_window(1, c, cfg.delta, cfg.horizon);
    log << "poisson-sim: c=" << c << " mean " << sums[j] / static_cast<double>(cfg.trials) << " (window reference "
        << ref << ")\n";
  }
  return kExitPass;
}

int run_lattice(const ExperimentConfig& cfg, Outputs& out, std::ostream& log) {
  std::vector<VolumeSpectrum> spectra(cfg.trials);
  std::vector<std::uint64_t> primes(cfg.trials);
  parallel_for(cfg.trials, cfg.workers, [&](std::uint64_t i) {
    const auto h = gm_sample(cfg.n, cfg.prime_bits, trial_seed(*cfg.seed, i));
    primes[i] = h.p;
    spectra[i] = volume_spectrum(h.basis, cfg.cutoff_volume);
  });
  auto f = out.jsonl("lattice-sim.jsonl");
  double total = 0.0;
  for (std::uint64_t i = 0; i < cfg.trials; ++i) {
    total += static_cast<double>(spectra[i].volumes.size());
    f << json{{"trial", i},
              {"seed", trial_seed(*cfg.seed, i)},
              {"n", cfg.n},
              {"p", primes[i]},
              {"cutoff", cfg.cutoff_volume},
              {"volumes", spectra[i].volumes}}
             .dump()
      << "\n";
  }
  log << "lattice-sim: mean count below cutoff " << total / static_cast<double>(cfg.trials) << " (Siegel "
      << cfg.cutoff_volume / 2.0 << ")\n";
  return kExitPass;
}

int run_zeta(const ExperimentConfig& cfg, Outputs& out, std::ostream& log, std::uint64_t& count) {
  std::ifstream in(cfg.input);
  if (!in) throw ConfigError("cannot read input " + cfg.input);
  struct Row {
    std::uint64_t trial, seed;
    VolumeSpectrum spec;
  };
  std::vector<Row> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("input is not JSONL: ") + e.what());
    }
    if (j.contains("manifest")) continue;
    try {
      Row r{j.at("trial").get<std::uint64_t>(), j.at("seed").get<std::uint64_t>(), {}};
      r.spec.volumes = j.at("volumes").get<std::vector<double>>();
      r.spec.cutoff_volume = j.at("cutoff").get<double>();
      r.spec.n = j.at("n").get<int>();
      for (double v : r.spec.volumes) r.spec.log_volumes.push_back(std::log(v));
      rows.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw ConfigError(std::string("input record missing fields: ") + e.what());
    }
  }
  count = rows.size();
  auto f = out.jsonl("zeta-eval.jsonl");
  for (const auto& r : rows)
    for (double c : cfg.c_list) {
      const ZetaValue z = cfg.delta > 0.0 ? epsilon_truncated(r.spec, c, cfg.delta) : epsilon_value(r.spec, c);
      f << json{{"trial", r.trial},
                {"seed", r.seed},
                {"c", c},
                {"delta", cfg.delta},
                {"epsilon", z.value},
                {"tail_estimate", z.tail_estimate}}
               .dump()
        << "\n";
    }
  log << "zeta-eval: " << rows.size() << " spectra x " << cfg.c_list.size() << " values of c\n";
  return kExitPass;
}

int run_bounds(const ExperimentConfig& cfg, Outputs& out, std::ostream& log) {
  std::vector<QuadResult> res(cfg.n_list.size());
  parallel_for(cfg.n_list.size(), cfg.workers, [&](std::uint64_t i) {
    SymIntegralSpec s;
    s.n = cfg.n_list[i];
    s.c = cfg.c_list.front();
    s.delta = cfg.delta;
    s.exponents = cfg.exponents;
    QuadConfig q;
    q.rel_tol = cfg.tol;
    res[i] = cfg.exponents.size() == 4 ? sym_integral_4(s, q) : sym_integral_3(s, q);
  });
  auto f = out.csv("bounds.csv");
  f << "n,value,envelope,error_estimate\n";
  for (std::size_t i = 0; i < res.size(); ++i)
    f << cfg.n_list[i] << "," << fmt_double(res[i].value) << "," << fmt_double(sym_envelope(cfg.n_list[i])) << ","
      << fmt_double(res[i].error_estimate) << "\n";
  log << "bounds: " << res.size() << " dimensions\n";
  return kExitPass;
}

int run_curves(const ExperimentConfig& cfg, Outputs& out, std::ostream& log, std::string& seed_rule) {
  CurveSampling s;
  s.n = cfg.n;
  s.grid = cfg.c_list;
  s.delta = cfg.delta;
  s.window = cfg.cutoff_volume;
  s.lattices = cfg.trials;
  s.poisson_trials = cfg.poisson_trials;
  s.prime_bits = cfg.prime_bits;
  s.lattice_seed = trial_seed(*cfg.seed, 0);
  s.poisson_seed = trial_seed(*cfg.seed, 1);
  seed_rule = std::string(kSeedRule) + "; lattice master = rule(seed, 0), poisson master = rule(seed, 1)";
  const auto e = sample_curves(s, cfg.workers);

  auto f = out.jsonl("curves.jsonl");
  std::vector<TestReport> reports;
  for (const Ensemble* en : {&e.lattice, &e.poisson}) {
    const std::uint64_t master = en == &e.lattice ? s.lattice_seed : s.poisson_seed;
    const std::size_t m = en->samples[0].size();
    std::uint64_t bad = 0;
    std::vector<double> y(s.grid.size());
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t g = 0; g < y.size(); ++g) y[g] = en->samples[g][i];
      const bool convex = convexity_audit(s.grid, y).pass;
      bad += convex ? 0 : 1;
      f << json{{"side", en->label}, {"trial", i}, {"seed", trial_seed(master, i)}, {"values", y}, {"convex", convex}}
               .dump()
        << "\n";
    }
    TestReport t;
    t.name = "convexity " + en->label;
    t.observed = static_cast<double>(bad);
    t.pass = bad == 0;
    t.sample_size = m;
    t.seeds = en->seeds;
    reports.push_back(t);
  }
  FiniteDimOptions opt;
  opt.delta = cfg.delta;
  opt.horizon = cfg.cutoff_volume;
  for (auto& t : finite_dim_compare(e.lattice, e.poisson, opt)) reports.push_back(std::move(t));

  json rj;
  rj["grid"] = s.grid;
  rj["reports"] = json::array();
  int fails = 0;
  for (const auto& t : reports) {
    fails += t.pass ? 0 : 1;
    rj["reports"].push_back({{"name", t.name},
                             {"observed", t.observed},
                             {"reference", t.reference},
                             {"tolerance", t.tolerance},
                             {"stderr", t.std_error},
                             {"pass", t.pass},
                             {"sample_size", t.sample_size},
                             {"seeds", t.seeds}});
    if (!t.pass) log << "curves: FAIL " << t.name << " observed " << t.observed << " reference " << t.reference
                     << " tolerance " << t.tolerance << "\n";
  }
  rj["pass"] = fails == 0;
  rj["manifest"] = out.manifest_name;
  out.open("curves_report.json") << rj.dump(2) << "\n";
  log << "curves: " << reports.size() - static_cast<std::size_t>(fails) << "/" << reports.size() << " panels pass\n";
  return fails == 0 ? kExitPass : kExitTestFailure;
}

int run_verify(const ExperimentConfig& cfg, Outputs& out, std::ostream& log) {
  const auto profile = AcceptanceProfile::by_name(cfg.profile);
  const auto results = run_acceptance(profile, cfg.workers, &log);
  out.open("verify_report.json") << acceptance_json(profile, results);
  log << acceptance_table(results);
  const bool ok = std::all_of(results.begin(), results.end(), [](const CriterionResult& c) { return c.pass; });
  return ok ? kExitPass : kExitTestFailure;
}

}  // namespace

int run(ExperimentConfig cfg, std::ostream& log) {
  try {
    bool generated = false;
    if (!cfg.seed) {
      std::random_device rd;
      cfg.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
      generated = true;
    }
    cfg.validate();
    const fs::path dir = cfg.output_dir.empty() ? default_output_dir() : fs::path(cfg.output_dir);
    fs::create_directories(dir);

    RunManifest m;
    m.config = cfg;
    m.code_version = version();
    m.timestamp = utc_now();
    m.master_seed = *cfg.seed;
    m.seed_generated = generated;
    Outputs out{dir, cfg.subcommand + ".manifest.json", config_digest(cfg), {}};

    std::uint64_t count = cfg.trials;
    int code = kExitPass;
    const auto& sc = cfg.subcommand;
    if (sc == "moments") {
      count = 0;
      code = run_moments(cfg, out, log);
    } else if (sc == "poisson-sim") {
      code = run_poisson(cfg, out, log);
    } else if (sc == "lattice-sim") {
      code = run_lattice(cfg, out, log);
    } else if (sc == "zeta-eval") {
      code = run_zeta(cfg, out, log, count);
    } else if (sc == "bounds") {
      count = 0;
      code = run_bounds(cfg, out, log);
    } else if (sc == "curves") {
      count = cfg.trials + cfg.poisson_trials;
      code = run_curves(cfg, out, log, m.seed_rule);
    } else {
      count = 0;
      m.seed_rule = "fixed per-criterion master seeds; " + std::string(kSeedRule);
      code = run_verify(cfg, out, log);
    }
    m.trial_count = count;
    for (const auto& name : out.files) m.output_digests[name] = sha256_file(dir / name);
    std::ofstream mf(dir / out.manifest_name, std::ios::binary | std::ios::trunc);
    mf << m.to_json();
    if (!mf) throw ConfigError("cannot write manifest in " + dir.string());
    log << "manifest: " << (dir / out.manifest_name).string() << "\n";
    return code;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const DomainError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const ResourceError& e) {
    log << "resource error: " << e.what() << "\n";
    return kExitResourceError;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitResourceError;
  }
}

int replay(const fs::path& manifest, const fs::path& output_dir, std::ostream& log) {
  RunManifest m;
  try {
    std::ifstream in(manifest);
    if (!in) throw ConfigError("cannot read manifest " + manifest.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    m = RunManifest::from_json(buf.str());
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  ExperimentConfig cfg = m.config;
  if (fs::equivalent(fs::absolute(output_dir).lexically_normal(),
                     fs::absolute(cfg.output_dir.empty() ? manifest.parent_path() : fs::path(cfg.output_dir)))) {
    log << "config error: replay output directory must differ from the original\n";
    return kExitConfigError;
  }
  cfg.output_dir = output_dir.string();
  const int code = run(cfg, log);
  if (code == kExitConfigError || code == kExitResourceError) return code;
  int mismatches = 0;
  for (const auto& [name, digest] : m.output_digests) {
    std::string now;
    try {
      now = sha256_file(output_dir / name);
    } catch (const ConfigError&) {
      now = "<missing>";
    }
    const bool same = now == digest;
    mismatches += same ? 0 : 1;
    log << "replay: " << name << (same ? " identical" : " DIFFERS") << "\n";
  }
  return mismatches == 0 ? kExitPass : kExitTestFailure;
}

}  // namespace epstein
