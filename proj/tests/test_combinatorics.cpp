#include "doctest.h"

#include "epstein/combinatorics.hpp"
#include "epstein/errors.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

using namespace epstein;

namespace {

// Bell numbers from B_{n+1} = sum_j C(n,j) B_j.
std::uint64_t bell_recurrence(int k) {
  std::vector<std::uint64_t> b{1};
  for (int n = 0; n < k; ++n) {
    std::uint64_t next = 0;
    for (int j = 0; j <= n; ++j) next += binomial(n, j) * b[static_cast<std::size_t>(j)];
    b.push_back(next);
  }
  return b[static_cast<std::size_t>(k)];
}

// Admissibility checked directly against every division (nu, mu) of {1..k}.
bool admissible_any_division(int m, int k, const std::vector<std::int64_t>& d, std::int64_t q) {
  auto at = [&](int i, int j) { return d[static_cast<std::size_t>(i * k + j)]; };
  for (int j = 0; j < k; ++j) {
    bool nonzero = false;
    for (int i = 0; i < m; ++i) nonzero |= at(i, j) != 0;
    if (!nonzero) return false;
  }
  std::int64_t g = q;
  for (auto v : d) g = std::gcd(g, v < 0 ? -v : v);
  if (g != 1) return false;
  for (unsigned mask = 0; mask < (1U << k); ++mask) {
    if (std::popcount(mask) != m) continue;
    std::vector<int> nu, mu;
    for (int j = 0; j < k; ++j) (mask >> j & 1U ? nu : mu).push_back(j);
    bool ok = true;
    for (int i = 0; i < m && ok; ++i)
      for (int j = 0; j < m && ok; ++j) ok = at(i, nu[static_cast<std::size_t>(j)]) == (i == j ? q : 0);
    for (int i = 0; i < m && ok; ++i)
      for (int mj : mu)
        if (mj < nu[static_cast<std::size_t>(i)] && at(i, mj) != 0) ok = false;
    if (ok) return true;
  }
  return false;
}

// Every matrix with one +-1 per column and row weights `parts`, filtered by
// the division-search admissibility test.
std::set<std::vector<std::int64_t>> brute_force_X(const Composition& parts) {
  const int m = parts.m(), k = parts.k();
  std::set<std::vector<std::int64_t>> out;
  std::vector<int> choice(static_cast<std::size_t>(k), 0);
  const int options = 2 * m;
  long total = 1;
  for (int j = 0; j < k; ++j) total *= options;
  for (long code = 0; code < total; ++code) {
    long c = code;
    std::vector<std::int64_t> d(static_cast<std::size_t>(m * k), 0);
    std::vector<int> weight(static_cast<std::size_t>(m), 0);
    for (int j = 0; j < k; ++j) {
      int o = static_cast<int>(c % options);
      c /= options;
      int row = o / 2;
      d[static_cast<std::size_t>(row * k + j)] = (o % 2 == 0) ? 1 : -1;
      ++weight[static_cast<std::size_t>(row)];
    }
    if (weight != parts.parts) continue;
    if (admissible_any_division(m, k, d, 1)) out.insert(d);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("combinatorics") {

TEST_CASE("set partitions: small cases and Bell counts") {
  auto p1 = enumerate_set_partitions(1);
  REQUIRE(p1.size() == 1);
  CHECK(p1[0].to_text() == "1");
  CHECK(enumerate_set_partitions(3).size() == 5);
  CHECK(enumerate_set_partitions(5).size() == 52);
  for (int k = 1; k <= 10; ++k) {
    CHECK(bell_number(k) == bell_recurrence(k));
    CHECK(enumerate_set_partitions(k).size() == bell_recurrence(k));
  }
  CHECK_THROWS_AS(enumerate_set_partitions(0), DomainError);
  CHECK_THROWS_AS(enumerate_set_partitions(13), DomainError);
}

TEST_CASE("set partitions: brute force over block assignments for k=3") {
  // All 3^3 label maps, canonicalized; the distinct ones are the partitions.
  std::set<std::string> seen;
  for (int code = 0; code < 27; ++code) {
    std::vector<std::vector<int>> blocks(3);
    for (int e = 0, c = code; e < 3; ++e, c /= 3) blocks[static_cast<std::size_t>(c % 3)].push_back(e + 1);
    std::erase_if(blocks, [](const auto& b) { return b.empty(); });
    seen.insert(SetPartition::from_blocks(3, blocks).to_text());
  }
  std::set<std::string> got;
  for (const auto& p : enumerate_set_partitions(3)) got.insert(p.to_text());
  CHECK(seen == got);
}

TEST_CASE("set partitions: canonical form invariants and ordering") {
  for (int k = 1; k <= 7; ++k) {
    auto all = enumerate_set_partitions(k);
    CHECK(std::is_sorted(all.begin(), all.end()));
    CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
    for (const auto& p : all) {
      auto blocks = p.blocks();
      std::vector<int> covered;
      for (const auto& b : blocks) {
        CHECK(!b.empty());
        CHECK(std::is_sorted(b.begin(), b.end()));
        covered.insert(covered.end(), b.begin(), b.end());
      }
      std::sort(covered.begin(), covered.end());
      std::vector<int> expect(static_cast<std::size_t>(k));
      std::iota(expect.begin(), expect.end(), 1);
      CHECK(covered == expect);
      auto minima = p.block_minima();
      CHECK(std::is_sorted(minima.begin(), minima.end()));
      CHECK(SetPartition::parse(p.to_text()) == p);
    }
  }
}

TEST_CASE("set partitions: malformed input") {
  CHECK_THROWS_AS(SetPartition::from_blocks(3, {{1, 2}, {2, 3}}), DomainError);
  CHECK_THROWS_AS(SetPartition::from_blocks(3, {{1, 2}}), DomainError);
  CHECK_THROWS_AS(SetPartition::from_blocks(2, {{1, 2}, {}}), DomainError);
  CHECK_THROWS_AS(SetPartition::parse("1 2;4"), DomainError);
}

TEST_CASE("compositions") {
  auto c2 = enumerate_compositions(2);
  REQUIRE(c2.size() == 2);
  CHECK(c2[0].parts == std::vector<int>{2});
  CHECK(c2[1].parts == std::vector<int>{1, 1});
  CHECK(enumerate_compositions(3).size() == 4);
  CHECK(enumerate_compositions(6).size() == 32);
  for (int k = 1; k <= 12; ++k) {
    auto all = enumerate_compositions(k);
    CHECK(all.size() == (std::size_t{1} << (k - 1)));
    std::set<std::vector<int>> distinct;
    for (const auto& c : all) {
      CHECK(c.k() == k);
      CHECK(std::ranges::all_of(c.parts, [](int x) { return x >= 1; }));
      distinct.insert(c.parts);
    }
    CHECK(distinct.size() == all.size());
  }
  CHECK_THROWS_AS(enumerate_compositions(21), DomainError);
  CHECK_THROWS_AS((Composition{{2, 0, 1}}.validate()), DomainError);
}

TEST_CASE("enumerate_D: counts, admissibility and bijection") {
  auto d1 = enumerate_D(1);
  REQUIRE(d1.size() == 1);
  CHECK(d1[0] == AdmissibleMatrix::identity(1));

  auto d2 = enumerate_D(2);
  REQUIRE(d2.size() == 2);
  CHECK(std::ranges::count(d2, AdmissibleMatrix::identity(2)) == 1);
  CHECK(std::ranges::count(d2, AdmissibleMatrix(1, 2, {1, 1})) == 1);

  for (int k = 1; k <= 8; ++k) {
    auto ds = enumerate_D(k);
    CHECK(ds.size() == bell_recurrence(k));
    std::set<SetPartition> images;
    for (const auto& d : ds) {
      CHECK(d.in_bell_class());
      if (d.rows() < k) CHECK(admissible_any_division(d.rows(), k, d.entries(), d.q()));
      auto p = bijection_g(d);
      CHECK(p.block_count() == d.rows());
      CHECK(p.block_minima() == d.division().nu);
      CHECK(bijection_g_inverse(p) == d);
      images.insert(p);
    }
    CHECK(images.size() == ds.size());
    auto all = enumerate_set_partitions(k);
    CHECK(std::set<SetPartition>(all.begin(), all.end()) == images);
  }
  CHECK(bijection_g(AdmissibleMatrix::identity(3)).to_text() == "1;2;3");
  CHECK(bijection_g(AdmissibleMatrix(1, 2, {1, 1})).to_text() == "1 2");
  CHECK_THROWS_AS(bijection_g(AdmissibleMatrix(1, 2, {1, -1})), DomainError);
  CHECK_THROWS_AS(enumerate_D(9), DomainError);
}

TEST_CASE("enumerate_X agrees with the division-search brute force") {
  auto x2 = enumerate_X(Composition{{2}});
  REQUIRE(x2.size() == 2);
  CHECK(std::ranges::count(x2, AdmissibleMatrix(1, 2, {1, 1})) == 1);
  CHECK(std::ranges::count(x2, AdmissibleMatrix(1, 2, {1, -1})) == 1);

  for (int k = 2; k <= 6; ++k) {
    for (const auto& comp : enumerate_compositions(k)) {
      if (comp.m() > k - 1) continue;
      auto xs = enumerate_X(comp);
      std::set<std::vector<std::int64_t>> got;
      for (const auto& d : xs) {
        CHECK(d.in_signed_class());
        CHECK(d.q() == 1);
        CHECK(d.row_weights() == comp.parts);
        got.insert(d.entries());
      }
      CHECK(got.size() == xs.size());
      auto oracle = brute_force_X(comp);
      CHECK_MESSAGE(got == oracle, comp.to_text());
      CHECK_MESSAGE(count_X(comp) == oracle.size(), comp.to_text());
    }
  }
}

TEST_CASE("count_X closed form on named compositions") {
  CHECK(count_X(Composition{{2}}) == 2);
  CHECK(count_X(Composition{{2, 1}}) == 4);
  CHECK(count_X(Composition{{1, 2}}) == 2);
  CHECK(count_X(Composition{{3}}) == 4);
  CHECK(count_X(Composition{{2, 2}}) == 12);
  CHECK(count_X(Composition{{3, 1}}) == 12);
  CHECK(count_X(Composition{{1, 3}}) == 4);
  CHECK(count_X(Composition{{1, 1, 2}}) == 2);
  CHECK_THROWS_AS(count_X(Composition{{1, 1}}), DomainError);
  CHECK_THROWS_AS(enumerate_X(Composition{{1, 1, 1}}), DomainError);
}

TEST_CASE("AdmissibleMatrix rejects each violated invariant") {
  CHECK_THROWS_AS(AdmissibleMatrix(1, 2, {1, 0}), DomainError);        // zero column
  CHECK_THROWS_AS(AdmissibleMatrix(1, 2, {2, 2}, 2), DomainError);     // gcd 2
  CHECK_THROWS_AS(AdmissibleMatrix(2, 3, {1, 1, 0, 1, 0, 1}), DomainError);  // nu column not a unit vector
  CHECK_THROWS_AS(AdmissibleMatrix(2, 3, {1, 0, 0, 0, 1, 0}), DomainError);  // zero column 3
  CHECK_NOTHROW(AdmissibleMatrix(2, 3, {1, 0, 1, 0, 1, -1}));
  CHECK_NOTHROW(AdmissibleMatrix(1, 2, {2, 1}, 2));
}

TEST_CASE("elementary divisors") {
  // q = 1 admissible matrices always contain an identity minor.
  for (const auto& comp : enumerate_compositions(5)) {
    if (comp.m() > 4) continue;
    for (const auto& d : enumerate_X(comp)) {
      auto e = d.elementary_divisors();
      CHECK(std::ranges::all_of(e, [](std::int64_t x) { return x == 1; }));
    }
  }
  AdmissibleMatrix d(2, 3, {2, 0, 1, 0, 2, 1}, 2);
  auto e = d.elementary_divisors();
  REQUIRE(e.size() == 2);
  CHECK(e[0] == 1);
  CHECK(e[1] == 2);
  CHECK(d.reduced_divisors() == std::vector<std::int64_t>{1, 2});
}

TEST_CASE("text round trip and golden file") {
  std::ostringstream out;
  for (int k = 1; k <= 4; ++k) {
    out << "# D(" << k << ")\n";
    for (const auto& d : enumerate_D(k)) out << d.to_text() << "\n--\n";
  }
  out << "# X(2,1)\n";
  for (const auto& d : enumerate_X(Composition{{2, 1}})) {
    out << d.to_text() << "\n--\n";
    CHECK(AdmissibleMatrix::parse(d.to_text()) == d);
  }
  out << "# P(4)\n";
  for (const auto& p : enumerate_set_partitions(4)) out << p.to_text() << "\n";
  const std::string golden = read_file(std::string(EPSTEIN_GOLDEN_DIR) + "/combinatorics.txt");
  CHECK(out.str() == golden);
}

}  // TEST_SUITE
