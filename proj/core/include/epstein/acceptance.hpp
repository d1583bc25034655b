#pragma once

// The acceptance suite: twelve numbered criteria, each reduced to a pass flag
// plus the panel of TestReports behind it. Sizes come from a profile; every
// seed is fixed here so runs are reproducible.

#include "epstein/stat_engine.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace epstein {

struct AcceptanceProfile {
  std::string name = "desk";
  std::uint64_t c1_lattices = 5000;   // n = 12
  double c1_cutoff = 100.0;
  std::uint64_t c6_trials = 1000000;  // Poisson, horizon below
  double c6_horizon = 1e4;
  std::uint64_t c7_lattices = 10000;  // n = 14
  std::uint64_t c8_lattices = 5000;   // n = 14, shared with criterion 9
  std::uint64_t c8_poisson = 100000;
  double c8_window = 1000.0;
  std::uint64_t c10_mc_samples = 1000000;
  int prime_bits = 40;

  static AcceptanceProfile desk();
  // Reduced sizes for smoke runs; statistical criteria may lose power.
  static AcceptanceProfile quick();
  static AcceptanceProfile by_name(const std::string& name);  // ConfigError if unknown
};

enum class CriterionKind { Exact, Analytic, Budget, Meta };

struct CriterionResult {
  int id = 0;
  std::string title;
  CriterionKind kind = CriterionKind::Exact;
  bool pass = false;
  std::string summary;  // one line
  double seconds = 0.0;
  std::vector<TestReport> reports;
};

const char* to_string(CriterionKind kind);

// Runs criteria `only` (all if empty). Progress lines go to `progress` if non-null.
std::vector<CriterionResult> run_acceptance(const AcceptanceProfile& profile, int workers, std::ostream* progress,
                                            const std::vector<int>& only = {});

// {"profile":..., "criteria":[{id,title,kind,pass,summary,seconds,reports:[...]}]}
std::string acceptance_json(const AcceptanceProfile& profile, const std::vector<CriterionResult>& results);
// Fixed-width table, one row per criterion.
std::string acceptance_table(const std::vector<CriterionResult>& results);

}  // namespace epstein

namespace epstein {

// Windowed curves c -> eps on (delta, window] for Hecke lattices of dimension
// n and c -> T on the same window for the Poisson process. Trial i of each
// side uses trial_seed(seed, i). samples[g][i] as in Ensemble.
struct CurveSampling {
  int n = 14;
  std::vector<double> grid;
  double delta = 1.0;
  double window = 1000.0;
  std::uint64_t lattices = 1000;
  std::uint64_t poisson_trials = 20000;
  int prime_bits = 40;
  std::uint64_t lattice_seed = 1;
  std::uint64_t poisson_seed = 2;
};

struct CurveEnsembles {
  Ensemble lattice;
  Ensemble poisson;
};

CurveEnsembles sample_curves(const CurveSampling& s, int workers);

// Restriction of an ensemble to the grid points in `sub` (must be present).
Ensemble select_grid(const Ensemble& e, const std::vector<double>& sub);

}  // namespace epstein
