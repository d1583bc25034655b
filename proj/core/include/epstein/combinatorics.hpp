#pragma once

// Set partitions, compositions and the admissible integer matrices that index
// the terms of the Rogers expansion surviving the large-dimension limit.
//
// Indices are 1-based everywhere in the public surface: a partition of
// {1..k}, column indices nu_i / mu_j in 1..k.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace epstein {

inline constexpr int kMaxPartitionSize = 12;   // Bell(12) = 4 213 597
inline constexpr int kMaxCompositionSize = 20; // 2^19 compositions
inline constexpr int kMaxMatrixSize = 8;       // admissible-matrix enumeration

// Bell numbers via the Bell triangle; exact for k <= 25.
std::uint64_t bell_number(int k);
std::uint64_t binomial(int n, int r);

// ---------------------------------------------------------------------------
// SetPartition

// A partition of {1..k} stored as its restricted growth string: label[i] is the
// block index (0-based, blocks numbered by increasing minimum) of element i+1.
class SetPartition {
 public:
  SetPartition() = default;

  // Builds from explicit blocks; blocks may come in any order and are
  // canonicalized. Throws DomainError if they are not a partition of {1..k}.
  static SetPartition from_blocks(int k, const std::vector<std::vector<int>>& blocks);
  static SetPartition from_labels(std::span<const std::uint8_t> labels);

  int k() const { return k_; }
  int block_count() const { return blocks_; }
  // Block index (0-based) of element `element` (1-based).
  int block_of(int element) const { return labels_[static_cast<std::size_t>(element - 1)]; }
  std::vector<std::vector<int>> blocks() const;
  std::vector<int> block_sizes() const;
  std::vector<int> block_minima() const;

  // "1 2;3" form.
  std::string to_text() const;
  static SetPartition parse(std::string_view text);

  friend bool operator==(const SetPartition& a, const SetPartition& b) {
    return a.k_ == b.k_ && a.labels_ == b.labels_;
  }
  friend auto operator<=>(const SetPartition& a, const SetPartition& b) {
    if (auto c = a.k_ <=> b.k_; c != 0) return c;
    return a.labels_ <=> b.labels_;
  }

 private:
  std::array<std::uint8_t, 16> labels_{};
  int k_ = 0;
  int blocks_ = 0;
};

// Calls `visit` with every restricted growth string of length k (lexicographic
// order), without materializing the list. Labels span has length k.
void for_each_set_partition(int k, const std::function<void(std::span<const std::uint8_t>, int)>& visit);

// Every partition of {1..k} once, in lexicographic order of restricted growth
// strings. 1 <= k <= kMaxPartitionSize.
std::vector<SetPartition> enumerate_set_partitions(int k);

// ---------------------------------------------------------------------------
// Composition

struct Composition {
  std::vector<int> parts;

  int k() const;
  int m() const { return static_cast<int>(parts.size()); }
  // Throws DomainError unless every part >= 1.
  void validate() const;
  std::string to_text() const;

  friend bool operator==(const Composition&, const Composition&) = default;
};

// All compositions of k in descending lexicographic order:
// (k), (k-1,1), ..., (1,...,1). 1 <= k <= kMaxCompositionSize.
std::vector<Composition> enumerate_compositions(int k);

// ---------------------------------------------------------------------------
// AdmissibleMatrix

struct Division {
  std::vector<int> nu;  // 1-based, strictly increasing
  std::vector<int> mu;  // complement of nu in 1..k, strictly increasing
  friend bool operator==(const Division&, const Division&) = default;
};

// An m x k integer matrix D together with q, (nu, mu)-admissible for the
// division derived from it: nu_i is the first nonzero column of row i. The
// k x k identity (q = 1) is admitted as the m = k member.
class AdmissibleMatrix {
 public:
  // Validates every admissibility invariant; throws DomainError on violation.
  AdmissibleMatrix(int rows, int cols, std::vector<std::int64_t> entries, std::int64_t q = 1);

  static AdmissibleMatrix identity(int k);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::int64_t q() const { return q_; }
  std::int64_t at(int row, int col) const {  // 0-based
    return entries_[static_cast<std::size_t>(row * cols_ + col)];
  }
  const std::vector<std::int64_t>& entries() const { return entries_; }
  const Division& division() const { return division_; }

  // Nonzero count of each row.
  std::vector<int> row_weights() const;
  // Column indices (1-based) whose entries in row `row` are nonzero.
  std::vector<int> row_support(int row) const;
  // True iff entries are in {0,1} with one 1 per column (or the identity).
  bool in_bell_class() const;
  // True iff entries are in {0,+-1} with one nonzero per column and m < k.
  bool in_signed_class() const;

  // Elementary divisors eps_1 | eps_2 | ... | eps_m via Smith normal form, and
  // e_i = gcd(eps_i, q).
  std::vector<std::int64_t> elementary_divisors() const;
  std::vector<std::int64_t> reduced_divisors() const;

  // Rows as space-separated integers, one row per line.
  std::string to_text() const;
  static AdmissibleMatrix parse(std::string_view text, std::int64_t q = 1);

  friend bool operator==(const AdmissibleMatrix& a, const AdmissibleMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.q_ == b.q_ && a.entries_ == b.entries_;
  }

 private:
  int rows_;
  int cols_;
  std::int64_t q_;
  std::vector<std::int64_t> entries_;
  Division division_;
};

// The Bell class D(k): {0,1}-matrices with one 1 per column plus I_k.
// Ordered by the restricted growth string of the image partition.
std::vector<AdmissibleMatrix> enumerate_D(int k);

// Block B_i of the image is the set of columns whose 1 sits in row i.
SetPartition bijection_g(const AdmissibleMatrix& d);

// Inverse of bijection_g (row i holds block i, blocks by increasing minimum).
AdmissibleMatrix bijection_g_inverse(const SetPartition& p);

// X_{k_1..k_m}: k-admissible {0,+-1} matrices with one nonzero per column and
// k_i nonzeros in row i. Requires 1 <= m <= k-1.
std::vector<AdmissibleMatrix> enumerate_X(const Composition& parts);

// Closed-form |X_{k_1..k_m}| = 2^(k-m) prod_{i<m} C(k - sum_{j<i} k_j - 1, k_i - 1).
std::uint64_t count_X(const Composition& parts);

// The binomial product alone (m = k allowed, giving 1).
std::uint64_t ordered_block_placements(const Composition& parts);

}  // namespace epstein
