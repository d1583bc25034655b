#include "epstein/combinatorics.hpp"

#include "epstein/errors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace epstein {

namespace {

void require_range(int k, int lo, int hi, const char* what) {
  if (k < lo || k > hi) {
    throw DomainError(std::string(what) + ": k=" + std::to_string(k) + " outside [" + std::to_string(lo) +
                      ", " + std::to_string(hi) + "]");
  }
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }

std::int64_t checked(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw DomainError("Smith normal form: integer overflow");
  return static_cast<std::int64_t>(v);
}

}  // namespace

std::uint64_t bell_number(int k) {
  require_range(k, 0, 25, "bell_number");
  std::vector<std::uint64_t> row{1};
  for (int i = 0; i < k; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (std::uint64_t v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

std::uint64_t binomial(int n, int r) {
  if (r < 0 || n < 0 || r > n) return 0;
  r = std::min(r, n - r);
  std::uint64_t result = 1;
  for (int i = 1; i <= r; ++i) result = result * static_cast<std::uint64_t>(n - r + i) / static_cast<std::uint64_t>(i);
  return result;
}

// ---------------------------------------------------------------------------

SetPartition SetPartition::from_labels(std::span<const std::uint8_t> labels) {
  if (labels.empty() || labels.size() > 16) throw DomainError("SetPartition: size must be in [1, 16]");
  SetPartition p;
  p.k_ = static_cast<int>(labels.size());
  int next = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] > next) throw DomainError("SetPartition: labels are not a restricted growth string");
    if (labels[i] == next) ++next;
    p.labels_[i] = labels[i];
  }
  p.blocks_ = next;
  return p;
}

SetPartition SetPartition::from_blocks(int k, const std::vector<std::vector<int>>& blocks) {
  if (k < 1 || k > 16) throw DomainError("SetPartition: k must be in [1, 16]");
  std::vector<int> owner(static_cast<std::size_t>(k), -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) throw DomainError("SetPartition: empty block");
    for (int e : blocks[b]) {
      if (e < 1 || e > k) throw DomainError("SetPartition: element out of range");
      auto& slot = owner[static_cast<std::size_t>(e - 1)];
      if (slot != -1) throw DomainError("SetPartition: blocks overlap");
      slot = static_cast<int>(b);
    }
  }
  if (std::ranges::find(owner, -1) != owner.end()) throw DomainError("SetPartition: blocks do not cover {1..k}");
  // Relabel by first appearance, which orders blocks by their minima.
  std::vector<int> relabel(blocks.size(), -1);
  std::vector<std::uint8_t> labels(static_cast<std::size_t>(k));
  int next = 0;
  for (int i = 0; i < k; ++i) {
    int& r = relabel[static_cast<std::size_t>(owner[static_cast<std::size_t>(i)])];
    if (r == -1) r = next++;
    labels[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(r);
  }
  return from_labels(labels);
}

std::vector<std::vector<int>> SetPartition::blocks() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(blocks_));
  for (int i = 0; i < k_; ++i) out[labels_[static_cast<std::size_t>(i)]].push_back(i + 1);
  return out;
}

std::vector<int> SetPartition::block_sizes() const {
  std::vector<int> sizes(static_cast<std::size_t>(blocks_), 0);
  for (int i = 0; i < k_; ++i) ++sizes[labels_[static_cast<std::size_t>(i)]];
  return sizes;
}

std::vector<int> SetPartition::block_minima() const {
  std::vector<int> minima;
  int next = 0;
  for (int i = 0; i < k_; ++i) {
    if (labels_[static_cast<std::size_t>(i)] == next) {
      minima.push_back(i + 1);
      ++next;
    }
  }
  return minima;
}

std::string SetPartition::to_text() const {
  std::ostringstream os;
  auto bs = blocks();
  for (std::size_t b = 0; b < bs.size(); ++b) {
    if (b != 0) os << ';';
    for (std::size_t i = 0; i < bs[b].size(); ++i) os << (i == 0 ? "" : " ") << bs[b][i];
  }
  return os.str();
}

SetPartition SetPartition::parse(std::string_view text) {
  std::vector<std::vector<int>> blocks;
  int k = 0;
  std::string s(text);
  std::istringstream blocks_in(s);
  std::string block;
  while (std::getline(blocks_in, block, ';')) {
    std::istringstream in(block);
    std::vector<int> elems;
    int e = 0;
    while (in >> e) {
      elems.push_back(e);
      k = std::max(k, e);
    }
    if (!in.eof()) throw DomainError("SetPartition::parse: malformed block '" + block + "'");
    blocks.push_back(std::move(elems));
  }
  return from_blocks(k, blocks);
}

void for_each_set_partition(int k, const std::function<void(std::span<const std::uint8_t>, int)>& visit) {
  require_range(k, 1, 16, "for_each_set_partition");
  // Restricted growth strings in lexicographic order; maxima[i] = max(labels[0..i]).
  std::vector<std::uint8_t> labels(static_cast<std::size_t>(k), 0);
  std::vector<int> maxima(static_cast<std::size_t>(k), 0);
  for (;;) {
    visit(labels, maxima.back() + 1);
    int i = k - 1;
    while (i > 0 && labels[static_cast<std::size_t>(i)] > maxima[static_cast<std::size_t>(i - 1)]) --i;
    if (i == 0) return;
    ++labels[static_cast<std::size_t>(i)];
    maxima[static_cast<std::size_t>(i)] =
        std::max<int>(maxima[static_cast<std::size_t>(i - 1)], labels[static_cast<std::size_t>(i)]);
    for (int j = i + 1; j < k; ++j) {
      labels[static_cast<std::size_t>(j)] = 0;
      maxima[static_cast<std::size_t>(j)] = maxima[static_cast<std::size_t>(i)];
    }
  }
}

std::vector<SetPartition> enumerate_set_partitions(int k) {
  require_range(k, 1, kMaxPartitionSize, "enumerate_set_partitions");
  std::vector<SetPartition> out;
  out.reserve(bell_number(k));
  for_each_set_partition(k, [&](std::span<const std::uint8_t> labels, int) { out.push_back(SetPartition::from_labels(labels)); });
  return out;
}

// ---------------------------------------------------------------------------

int Composition::k() const { return std::accumulate(parts.begin(), parts.end(), 0); }

void Composition::validate() const {
  if (parts.empty()) throw DomainError("Composition: no parts");
  for (int p : parts)
    if (p < 1) throw DomainError("Composition: parts must be >= 1");
}

std::string Composition::to_text() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < parts.size(); ++i) os << (i == 0 ? "" : ",") << parts[i];
  os << ')';
  return os.str();
}

std::vector<Composition> enumerate_compositions(int k) {
  require_range(k, 1, kMaxCompositionSize, "enumerate_compositions");
  std::vector<Composition> out;
  out.reserve(std::size_t{1} << (k - 1));
  std::vector<int> current;
  std::function<void(int)> rec = [&](int remaining) {
    if (remaining == 0) {
      out.push_back(Composition{current});
      return;
    }
    for (int first = remaining; first >= 1; --first) {
      current.push_back(first);
      rec(remaining - first);
      current.pop_back();
    }
  };
  rec(k);
  return out;
}

// ---------------------------------------------------------------------------

AdmissibleMatrix::AdmissibleMatrix(int rows, int cols, std::vector<std::int64_t> entries, std::int64_t q)
    : rows_(rows), cols_(cols), q_(q), entries_(std::move(entries)) {
  if (rows < 1 || cols < 1 || rows > cols) throw DomainError("AdmissibleMatrix: need 1 <= m <= k");
  if (entries_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
    throw DomainError("AdmissibleMatrix: entry count does not match shape");
  if (q < 1) throw DomainError("AdmissibleMatrix: q must be positive");

  std::int64_t g = 0;
  for (auto v : entries_) g = gcd64(g, v);
  if (g != 1) throw DomainError("AdmissibleMatrix: gcd of entries must be 1");
  for (int j = 0; j < cols; ++j) {
    bool any = false;
    for (int i = 0; i < rows; ++i) any = any || at(i, j) != 0;
    if (!any) throw DomainError("AdmissibleMatrix: column " + std::to_string(j + 1) + " vanishes");
  }

  // nu_i = first nonzero column of row i.
  for (int i = 0; i < rows; ++i) {
    int first = -1;
    for (int j = 0; j < cols && first < 0; ++j)
      if (at(i, j) != 0) first = j;
    if (first < 0) throw DomainError("AdmissibleMatrix: zero row");
    division_.nu.push_back(first + 1);
  }
  for (int i = 1; i < rows; ++i)
    if (division_.nu[static_cast<std::size_t>(i)] <= division_.nu[static_cast<std::size_t>(i - 1)])
      throw DomainError("AdmissibleMatrix: nu must be strictly increasing");
  for (int j = 1; j <= cols; ++j)
    if (!std::ranges::binary_search(division_.nu, j)) division_.mu.push_back(j);

  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < rows; ++j)
      if (at(i, division_.nu[static_cast<std::size_t>(j)] - 1) != (i == j ? q : 0))
        throw DomainError("AdmissibleMatrix: d[i][nu_j] must equal q*delta_ij");
  for (int i = 0; i < rows; ++i)
    for (int mu : division_.mu)
      if (mu < division_.nu[static_cast<std::size_t>(i)] && at(i, mu - 1) != 0)
        throw DomainError("AdmissibleMatrix: d[i][mu_j] must vanish for mu_j < nu_i");
  if (rows == cols && !division_.mu.empty()) throw DomainError("AdmissibleMatrix: square member must be the identity");
}

AdmissibleMatrix AdmissibleMatrix::identity(int k) {
  std::vector<std::int64_t> e(static_cast<std::size_t>(k * k), 0);
  for (int i = 0; i < k; ++i) e[static_cast<std::size_t>(i * k + i)] = 1;
  return AdmissibleMatrix(k, k, std::move(e), 1);
}

std::vector<int> AdmissibleMatrix::row_weights() const {
  std::vector<int> w(static_cast<std::size_t>(rows_), 0);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) w[static_cast<std::size_t>(i)] += at(i, j) != 0 ? 1 : 0;
  return w;
}

std::vector<int> AdmissibleMatrix::row_support(int row) const {
  std::vector<int> s;
  for (int j = 0; j < cols_; ++j)
    if (at(row, j) != 0) s.push_back(j + 1);
  return s;
}

bool AdmissibleMatrix::in_bell_class() const {
  if (q_ != 1) return false;
  for (int j = 0; j < cols_; ++j) {
    int ones = 0;
    for (int i = 0; i < rows_; ++i) {
      auto v = at(i, j);
      if (v != 0 && v != 1) return false;
      ones += static_cast<int>(v);
    }
    if (ones != 1) return false;
  }
  return true;
}

bool AdmissibleMatrix::in_signed_class() const {
  if (q_ != 1 || rows_ >= cols_) return false;
  for (int j = 0; j < cols_; ++j) {
    int nonzero = 0;
    for (int i = 0; i < rows_; ++i) {
      auto v = at(i, j);
      if (v < -1 || v > 1) return false;
      nonzero += v != 0 ? 1 : 0;
    }
    if (nonzero != 1) return false;
  }
  return true;
}

std::vector<std::int64_t> AdmissibleMatrix::elementary_divisors() const {
  // Smith normal form by repeated pivoting on the smallest nonzero entry.
  std::vector<std::vector<std::int64_t>> a(static_cast<std::size_t>(rows_), std::vector<std::int64_t>(static_cast<std::size_t>(cols_)));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = at(i, j);
  const int m = rows_, k = cols_;
  std::vector<std::int64_t> diag;
  for (int t = 0; t < m; ++t) {
    for (;;) {
      int pi = -1, pj = -1;
      std::int64_t best = 0;
      for (int i = t; i < m; ++i)
        for (int j = t; j < k; ++j) {
          auto v = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
          auto av = v < 0 ? -v : v;
          if (v != 0 && (best == 0 || av < best)) {
            best = av;
            pi = i;
            pj = j;
          }
        }
      if (pi < 0) break;
      std::swap(a[static_cast<std::size_t>(t)], a[static_cast<std::size_t>(pi)]);
      for (auto& row : a) std::swap(row[static_cast<std::size_t>(t)], row[static_cast<std::size_t>(pj)]);
      const auto piv = a[static_cast<std::size_t>(t)][static_cast<std::size_t>(t)];
      bool clean = true;
      for (int i = t + 1; i < m; ++i) {
        auto& row = a[static_cast<std::size_t>(i)];
        auto f = row[static_cast<std::size_t>(t)] / piv;
        if (f != 0)
          for (int j = t; j < k; ++j)
            row[static_cast<std::size_t>(j)] =
                checked(static_cast<__int128>(row[static_cast<std::size_t>(j)]) - static_cast<__int128>(f) * a[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)]);
        clean = clean && row[static_cast<std::size_t>(t)] == 0;
      }
      for (int j = t + 1; j < k; ++j) {
        auto f = a[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)] / piv;
        if (f != 0)
          for (int i = t; i < m; ++i)
            a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                checked(static_cast<__int128>(a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) - static_cast<__int128>(f) * a[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)]);
        clean = clean && a[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)] == 0;
      }
      if (!clean) continue;
      // Divisibility: the pivot must divide the remaining block.
      bool divides = true;
      for (int i = t + 1; i < m && divides; ++i)
        for (int j = t + 1; j < k && divides; ++j)
          if (a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] % piv != 0) {
            for (int jj = t; jj < k; ++jj)
              a[static_cast<std::size_t>(t)][static_cast<std::size_t>(jj)] += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(jj)];
            divides = false;
          }
      if (divides) break;
    }
    auto v = a[static_cast<std::size_t>(t)][static_cast<std::size_t>(t)];
    diag.push_back(v < 0 ? -v : v);
  }
  return diag;
}

std::vector<std::int64_t> AdmissibleMatrix::reduced_divisors() const {
  auto eps = elementary_divisors();
  for (auto& e : eps) e = gcd64(e, q_);
  return eps;
}

std::string AdmissibleMatrix::to_text() const {
  std::ostringstream os;
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) os << (j == 0 ? "" : " ") << at(i, j);
    os << '\n';
  }
  return os.str();
}

AdmissibleMatrix AdmissibleMatrix::parse(std::string_view text, std::int64_t q) {
  std::istringstream lines{std::string(text)};
  std::string line;
  std::vector<std::int64_t> entries;
  int rows = 0, cols = -1;
  while (std::getline(lines, line)) {
    std::istringstream in(line);
    std::int64_t v = 0;
    int count = 0;
    while (in >> v) {
      entries.push_back(v);
      ++count;
    }
    if (count == 0) continue;
    if (cols >= 0 && count != cols) throw DomainError("AdmissibleMatrix::parse: ragged rows");
    cols = count;
    ++rows;
  }
  if (rows == 0) throw DomainError("AdmissibleMatrix::parse: empty input");
  return AdmissibleMatrix(rows, cols, std::move(entries), q);
}

// ---------------------------------------------------------------------------

AdmissibleMatrix bijection_g_inverse(const SetPartition& p) {
  const int k = p.k(), m = p.block_count();
  std::vector<std::int64_t> e(static_cast<std::size_t>(m * k), 0);
  for (int j = 1; j <= k; ++j) e[static_cast<std::size_t>(p.block_of(j) * k + (j - 1))] = 1;
  return AdmissibleMatrix(m, k, std::move(e), 1);
}

std::vector<AdmissibleMatrix> enumerate_D(int k) {
  require_range(k, 1, kMaxMatrixSize, "enumerate_D");
  std::vector<AdmissibleMatrix> out;
  for_each_set_partition(k, [&](std::span<const std::uint8_t> labels, int) {
    out.push_back(bijection_g_inverse(SetPartition::from_labels(labels)));
  });
  return out;
}

SetPartition bijection_g(const AdmissibleMatrix& d) {
  if (!d.in_bell_class()) throw DomainError("bijection_g: matrix is not in D(k)");
  std::vector<std::vector<int>> blocks;
  for (int i = 0; i < d.rows(); ++i) blocks.push_back(d.row_support(i));
  return SetPartition::from_blocks(d.cols(), blocks);
}

std::vector<AdmissibleMatrix> enumerate_X(const Composition& parts) {
  parts.validate();
  const int k = parts.k(), m = parts.m();
  if (m > k - 1) throw DomainError("enumerate_X: need 1 <= m <= k-1");
  require_range(k, 2, kMaxMatrixSize, "enumerate_X");

  std::vector<AdmissibleMatrix> out;
  std::vector<std::int64_t> entries(static_cast<std::size_t>(m * k), 0);
  std::vector<bool> used(static_cast<std::size_t>(k), false);

  // Row i takes the smallest unused column as nu_i, then k_i - 1 later unused
  // columns; the leading entry is +1, the rest carry free signs.
  std::function<void(int)> place_row = [&](int row) {
    if (row == m) {
      out.emplace_back(m, k, entries, 1);
      return;
    }
    const int lead = static_cast<int>(std::ranges::find(used, false) - used.begin());
    std::vector<int> free_cols;
    for (int j = lead + 1; j < k; ++j)
      if (!used[static_cast<std::size_t>(j)]) free_cols.push_back(j);
    const int extra = parts.parts[static_cast<std::size_t>(row)] - 1;
    if (extra > static_cast<int>(free_cols.size())) return;

    std::vector<int> pick(static_cast<std::size_t>(extra));
    std::function<void(int, int)> choose = [&](int slot, int from) {
      if (slot == extra) {
        for (std::uint32_t signs = 0; signs < (1U << extra); ++signs) {
          entries[static_cast<std::size_t>(row * k + lead)] = 1;
          used[static_cast<std::size_t>(lead)] = true;
          for (int s = 0; s < extra; ++s) {
            int col = pick[static_cast<std::size_t>(s)];
            entries[static_cast<std::size_t>(row * k + col)] = (signs >> s) & 1U ? -1 : 1;
            used[static_cast<std::size_t>(col)] = true;
          }
          place_row(row + 1);
          entries[static_cast<std::size_t>(row * k + lead)] = 0;
          used[static_cast<std::size_t>(lead)] = false;
          for (int s = 0; s < extra; ++s) {
            int col = pick[static_cast<std::size_t>(s)];
            entries[static_cast<std::size_t>(row * k + col)] = 0;
            used[static_cast<std::size_t>(col)] = false;
          }
        }
        return;
      }
      for (int idx = from; idx < static_cast<int>(free_cols.size()); ++idx) {
        pick[static_cast<std::size_t>(slot)] = free_cols[static_cast<std::size_t>(idx)];
        choose(slot + 1, idx + 1);
      }
    };
    choose(0, 0);
  };
  place_row(0);
  // Rows that leave a column uncovered never complete; every emitted matrix
  // covers all k columns because the row weights sum to k.
  return out;
}

std::uint64_t ordered_block_placements(const Composition& parts) {
  parts.validate();
  const int k = parts.k(), m = parts.m();
  std::uint64_t product = 1;
  int consumed = 0;
  for (int i = 0; i + 1 < m; ++i) {
    product *= binomial(k - consumed - 1, parts.parts[static_cast<std::size_t>(i)] - 1);
    consumed += parts.parts[static_cast<std::size_t>(i)];
  }
  return product;
}

std::uint64_t count_X(const Composition& parts) {
  parts.validate();
  const int k = parts.k(), m = parts.m();
  if (m > k - 1) throw DomainError("count_X: need 1 <= m <= k-1");
  return (std::uint64_t{1} << (k - m)) * ordered_block_placements(parts);
}

}  // namespace epstein
