#pragma once

// Experiment configuration, run manifests, the deterministic worker pool and
// the subcommand pipelines behind the epstein_lab tool.

#include "epstein/rng.hpp"

#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace epstein {

std::string version();

inline constexpr const char* kSubcommands[] = {"moments", "poisson-sim", "lattice-sim", "zeta-eval",
                                               "bounds",  "verify",      "curves"};

enum ExitCode : int { kExitPass = 0, kExitTestFailure = 1, kExitConfigError = 2, kExitResourceError = 3 };

struct ExperimentConfig {
  std::string subcommand;
  int n = 12;
  int k = 4;
  std::uint64_t trials = 1000;
  std::vector<double> c_list = {1.0};
  double delta = 1.0;
  double horizon = 200.0;
  std::optional<std::uint64_t> seed;  // generated and recorded by run() if absent
  std::uint64_t poisson_trials = 20000;  // curves: Poisson side
  double cutoff_volume = 100.0;
  int prime_bits = 40;
  double tol = 1e-7;  // bounds: quadrature relative tolerance
  std::vector<int> n_list = {6, 10, 14, 18, 22, 26, 30, 34, 38};
  std::vector<int> exponents = {1, 1, 1, 1};
  std::string profile = "desk";
  std::string input;
  std::string output_dir;  // empty: $EPSTEIN_LAB_OUT, then "."
  int workers = 0;          // 0: hardware concurrency

  // Throws ConfigError.
  void validate() const;
  // Parses and validates a single key; unknown keys and bad values throw ConfigError.
  void set(std::string_view key, std::string_view value);
  // key=value lines in a fixed key order; parse(serialize(x)) == x.
  std::string serialize() const;
  static ExperimentConfig parse(std::string_view text);

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

// Seed of trial i under master seed m; recorded in manifests as a rule.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t i) { return Rng::derive(master, i); }
inline constexpr const char* kSeedRule = "splitmix64(master + 0x9e3779b97f4a7c15 * (i + 1))";

struct RunManifest {
  ExperimentConfig config;
  std::string code_version;
  std::string timestamp;  // UTC, ISO 8601
  std::string seed_rule = kSeedRule;
  std::uint64_t master_seed = 0;
  bool seed_generated = false;
  std::uint64_t trial_count = 0;
  std::map<std::string, std::string> output_digests;  // file name -> sha256

  std::string to_json() const;
  static RunManifest from_json(std::string_view text);
};

int resolve_workers(int requested);

// Calls fn(i) for i in [0, count) on `workers` threads. Results written by
// index, so the outcome never depends on the worker count. The first
// exception thrown by any call is rethrown after all workers stop.
template <class Fn>
void parallel_for(std::uint64_t count, int workers, Fn&& fn) {
  workers = resolve_workers(workers);
  if (workers <= 1 || count < 2) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= count || stop.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        stop = true;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const auto nthreads = static_cast<std::uint64_t>(workers) < count ? workers : static_cast<int>(count);
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// Runs one subcommand, writes outputs and a manifest under the output
// directory, and returns an ExitCode. Diagnostics go to `log`.
int run(ExperimentConfig config, std::ostream& log);

// Re-runs the configuration recorded in a manifest into `output_dir` and
// compares output digests. kExitPass iff every digest matches.
int replay(const std::filesystem::path& manifest, const std::filesystem::path& output_dir, std::ostream& log);

std::filesystem::path default_output_dir();

}  // namespace epstein
