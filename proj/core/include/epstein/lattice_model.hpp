#pragma once

// Integer lattices rescaled to covolume one: Hecke-point sampling, LLL
// reduction, short-vector enumeration and the normalized volume spectrum
// V_j = V_n l_j^n (one entry per pair +-v).

#include "epstein/errors.hpp"
#include "epstein/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace epstein {

class LatticeBasis {
 public:
  LatticeBasis() = default;
  // Rows are basis vectors; row-major n x n. Throws DomainError if singular.
  LatticeBasis(int n, std::vector<std::int64_t> rows);

  int n() const { return n_; }
  std::int64_t at(int row, int col) const { return rows_[static_cast<std::size_t>(row * n_ + col)]; }
  const std::vector<std::int64_t>& rows() const { return rows_; }
  const BigInt& determinant() const { return det_; }  // signed, exact
  // s = |det|^(-1/n), so the real lattice rows * s has covolume one.
  double covolume_normalizer() const;
  double log_covolume_normalizer() const { return log_s_; }

 private:
  int n_ = 0;
  std::vector<std::int64_t> rows_;
  BigInt det_;
  double log_s_ = 0.0;
};

struct HeckeSample {
  LatticeBasis basis;
  std::uint64_t p = 0;
  std::vector<std::uint64_t> a;  // a_1 .. a_{n-1}
};

bool is_prime_u64(std::uint64_t x);

// Hecke point of index p: rows (p, 0, ..., 0) and a_i e_1 + e_{i+1}, with p a
// uniform random prime of exactly `prime_bits` bits and a_i uniform mod p.
// 2 <= n, 20 <= prime_bits <= 62.
HeckeSample gm_sample(int n, int prime_bits, std::uint64_t seed);

struct LllResult {
  LatticeBasis basis;
  std::vector<std::int64_t> transform;  // reduced = transform * input, det = +-1
  bool extended_precision = false;      // true if the 50-digit pass was used
};

// LLL with exact integer inner products and floating Gram-Schmidt. Long double
// is used for entries below 2^24; larger entries, or a long double pass that
// loses precision, go to 50-digit binary floating point.
LllResult lll_reduce_with_transform(const LatticeBasis& basis, double delta_lll = 0.99);
LatticeBasis lll_reduce(const LatticeBasis& basis, double delta_lll = 0.99);
// Size-reduced and Lovasz condition hold (checked in long double).
bool is_lll_reduced(const LatticeBasis& basis, double delta_lll = 0.99);

class EnumerationBudgetExceeded : public ResourceError {
 public:
  EnumerationBudgetExceeded(std::vector<std::int64_t> partial, std::uint64_t nodes)
      : ResourceError("enumerate_short: node budget exhausted after " + std::to_string(nodes) + " nodes"),
        partial_(std::move(partial)),
        nodes_(nodes) {}
  const std::vector<std::int64_t>& partial() const { return partial_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  std::vector<std::int64_t> partial_;
  std::uint64_t nodes_;
};

inline constexpr std::uint64_t kDefaultNodeBudget = 200'000'000;

// Sorted exact squared norms of all nonzero v with |v|^2 <= radius_sq, one per
// pair +-v. The basis should be LLL-reduced for speed; correctness does not
// depend on it.
std::vector<std::int64_t> enumerate_short(const LatticeBasis& basis, std::int64_t radius_sq,
                                          std::uint64_t node_budget = kDefaultNodeBudget);

struct VolumeSpectrum {
  std::vector<double> volumes;      // nondecreasing
  std::vector<double> log_volumes;  // same order
  std::vector<std::int64_t> sq_norms;
  double cutoff_volume = 0.0;
  int n = 0;
};

// Integer squared-norm radius that certifies every vector of volume <= cutoff.
std::int64_t radius_for_volume(const LatticeBasis& basis, double cutoff_volume);

// Reduces, enumerates and normalizes. The spectrum is complete up to cutoff.
VolumeSpectrum volume_spectrum(const LatticeBasis& basis, double cutoff_volume,
                               std::uint64_t node_budget = kDefaultNodeBudget);

// Spectrum from given squared norms of a lattice with normalizer s (tests and
// synthetic inputs).
VolumeSpectrum spectrum_from_norms(int n, double log_s, std::vector<std::int64_t> sq_norms, double cutoff_volume);

// #{j : V_j <= t}; throws DomainError past the cutoff.
std::size_t counting_function(const VolumeSpectrum& spec, double t);

}  // namespace epstein
