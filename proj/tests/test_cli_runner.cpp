#include "doctest.h"

#include "epstein/cli_runner.hpp"
#include "epstein/errors.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace epstein;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("epstein_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("cli_runner") {

TEST_CASE("config round trip") {
  ExperimentConfig a;
  a.subcommand = "poisson-sim";
  a.c_list = {0.6, 0.75, 1.0 / 3.0 + 1.0};
  a.delta = 0.1;
  a.seed = 18446744073709551615ULL;
  a.n_list = {3, 7};
  a.exponents = {2, 1, 1};
  a.output_dir = "some dir";
  const auto b = ExperimentConfig::parse(a.serialize());
  CHECK(b == a);
  CHECK(ExperimentConfig::parse(b.serialize()).serialize() == a.serialize());

  ExperimentConfig d;
  CHECK(ExperimentConfig::parse(d.serialize()) == d);
  CHECK_FALSE(ExperimentConfig::parse(d.serialize()).seed.has_value());

  const auto c = ExperimentConfig::parse("# comment\n\n  n = 14 \nc=0.75, 1\nsubcommand=curves\n");
  CHECK(c.n == 14);
  CHECK(c.c_list == std::vector<double>{0.75, 1.0});
  CHECK_THROWS_AS(ExperimentConfig::parse("n=abc\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("n=3x\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("colour=blue\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("just text\n"), ConfigError);
}

TEST_CASE("validation") {
  ExperimentConfig c;
  c.subcommand = "moments";
  CHECK_NOTHROW(c.validate());
  c.c_list = {0.5};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.c_list = {1.0, 0.75};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.c_list = {1.0};
  c.subcommand = "nope";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.subcommand = "poisson-sim";
  c.horizon = 0.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.subcommand = "zeta-eval";
  c.delta = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);  // no input
  c.input = "x.jsonl";
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("manifest round trip") {
  RunManifest m;
  m.config.subcommand = "lattice-sim";
  m.config.seed = 42;
  m.code_version = version();
  m.timestamp = "2026-01-01T00:00:00Z";
  m.master_seed = 42;
  m.trial_count = 7;
  m.output_digests["a.jsonl"] = sha256_hex("a");
  const auto r = RunManifest::from_json(m.to_json());
  CHECK(r.config == m.config);
  CHECK(r.output_digests == m.output_digests);
  CHECK(r.trial_count == 7);
  CHECK(r.seed_rule == kSeedRule);
  CHECK_THROWS_AS(RunManifest::from_json("{}"), ConfigError);
}

TEST_CASE("parallel_for is deterministic and propagates errors") {
  std::vector<std::uint64_t> a(1000), b(1000);
  parallel_for(1000, 1, [&](std::uint64_t i) { a[i] = trial_seed(9, i); });
  parallel_for(1000, 4, [&](std::uint64_t i) { b[i] = trial_seed(9, i); });
  CHECK(a == b);
  std::atomic<int> calls{0};
  CHECK_THROWS_AS(parallel_for(100, 3,
                               [&](std::uint64_t i) {
                                 ++calls;
                                 if (i == 10) throw ResourceError("boom");
                               }),
                  ResourceError);
  CHECK(calls.load() <= 100);
}

TEST_CASE("runs write outputs and manifests") {
  const auto dir = scratch("run");
  std::ostringstream log;
  ExperimentConfig c;
  c.subcommand = "moments";
  c.k = 3;
  c.c_list = {0.75, 1.0};
  c.output_dir = dir.string();
  REQUIRE(run(c, log) == kExitPass);
  const auto csv = slurp(dir / "moments.csv");
  CHECK(csv.rfind("# manifest=moments.manifest.json", 0) == 0);
  CHECK(csv.find("2,1,1,1.6666666666666665,1.6666666666666665,0") != std::string::npos);
  const auto m = RunManifest::from_json(slurp(dir / "moments.manifest.json"));
  CHECK(m.seed_generated);
  CHECK(m.config.seed.has_value());
  CHECK(m.output_digests.at("moments.csv") == sha256_file(dir / "moments.csv"));

  ExperimentConfig p;
  p.subcommand = "poisson-sim";
  p.trials = 300;
  p.c_list = {0.75, 1.0};
  p.seed = 11;
  p.output_dir = dir.string();
  p.workers = 3;
  REQUIRE(run(p, log) == kExitPass);
  const auto first = sha256_file(dir / "poisson-sim.jsonl");
  p.workers = 1;
  p.output_dir = (dir / "serial").string();
  REQUIRE(run(p, log) == kExitPass);
  CHECK(sha256_file(dir / "serial" / "poisson-sim.jsonl") == first);
  CHECK(replay(dir / "poisson-sim.manifest.json", dir / "replayed", log) == kExitPass);
  CHECK(replay(dir / "poisson-sim.manifest.json", dir, log) == kExitConfigError);

  ExperimentConfig l;
  l.subcommand = "lattice-sim";
  l.n = 6;
  l.trials = 5;
  l.cutoff_volume = 20;
  l.seed = 4;
  l.output_dir = dir.string();
  REQUIRE(run(l, log) == kExitPass);
  ExperimentConfig z;
  z.subcommand = "zeta-eval";
  z.input = (dir / "lattice-sim.jsonl").string();
  z.seed = 0;
  z.output_dir = dir.string();
  REQUIRE(run(z, log) == kExitPass);
  CHECK(replay(dir / "zeta-eval.manifest.json", dir / "z2", log) == kExitPass);
  fs::remove_all(dir);
}

TEST_CASE("exit codes") {
  const auto dir = scratch("codes");
  std::ostringstream log;
  ExperimentConfig c;
  c.subcommand = "lattice-sim";
  c.n = 1;
  c.output_dir = dir.string();
  CHECK(run(c, log) == kExitConfigError);
  ExperimentConfig z;
  z.subcommand = "zeta-eval";
  z.input = (dir / "missing.jsonl").string();
  z.output_dir = dir.string();
  CHECK(run(z, log) == kExitConfigError);
  ExperimentConfig t;
  t.subcommand = "zeta-eval";
  fs::create_directories(dir);
  std::ofstream(dir / "spec.jsonl") << R"({"trial":0,"seed":1,"n":4,"cutoff":5,"volumes":[1,2]})" << "\n";
  t.input = (dir / "spec.jsonl").string();
  t.delta = 9.0;  // beyond the cutoff
  t.output_dir = dir.string();
  CHECK(run(t, log) == kExitConfigError);
  fs::remove_all(dir);
}

}
