#include "epstein/lattice_model.hpp"

#include "epstein/ball.hpp"
#include "integer_det.hpp"
#include "epstein/rng.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>

namespace epstein {

namespace {

using i128 = __int128;
using Float50 = boost::multiprecision::cpp_bin_float_50;

struct PrecisionLoss {};

std::int64_t narrow(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw PrecisionLoss{};
  return static_cast<std::int64_t>(v);
}

BigInt to_big(i128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  BigInt r = static_cast<std::uint64_t>(u >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(u);
  return neg ? BigInt(-r) : r;
}

template <class Real>
Real to_real(i128 v) {
  if constexpr (std::is_same_v<Real, long double>) {
    return static_cast<long double>(v);
  } else {
    return Real(to_big(v));
  }
}

i128 dot(const std::int64_t* a, const std::int64_t* b, int n) {
  i128 s = 0;
  for (int i = 0; i < n; ++i) {
    if (__builtin_add_overflow(s, static_cast<i128>(a[i]) * b[i], &s)) throw PrecisionLoss{};
  }
  return s;
}

template <class Real>
Real rounded(const Real& x) {
  using std::floor;
  using boost::multiprecision::floor;
  return floor(x + Real(0.5));
}

template <class Real>
void lll_pass(int n, std::vector<std::int64_t>& b, std::vector<std::int64_t>& t, double delta_lll) {
  std::vector<Real> mu(static_cast<std::size_t>(n * n), Real(0));
  std::vector<Real> r(static_cast<std::size_t>(n * n), Real(0));
  std::vector<Real> bstar(static_cast<std::size_t>(n), Real(0));
  auto row = [&](std::vector<std::int64_t>& v, int i) { return v.data() + static_cast<std::ptrdiff_t>(i) * n; };
  auto M = [&](int i, int j) -> Real& { return mu[static_cast<std::size_t>(i * n + j)]; };
  auto Rr = [&](int i, int j) -> Real& { return r[static_cast<std::size_t>(i * n + j)]; };

  // Gram-Schmidt data of row k from exact inner products; rows < k must be current.
  auto gso_row = [&](int k) {
    for (int j = 0; j <= k; ++j) {
      Real s = to_real<Real>(dot(row(b, k), row(b, j), n));
      for (int i = 0; i < j; ++i) s -= M(j, i) * Rr(k, i);
      Rr(k, j) = s;
      if (j < k) M(k, j) = s / bstar[static_cast<std::size_t>(j)];
    }
    bstar[static_cast<std::size_t>(k)] = Rr(k, k);
    if (!(bstar[static_cast<std::size_t>(k)] > Real(0))) throw PrecisionLoss{};
  };
  auto sub_row = [&](std::vector<std::int64_t>& v, int k, int j, std::int64_t q) {
    std::int64_t* dst = row(v, k);
    const std::int64_t* src = row(v, j);
    for (int c = 0; c < n; ++c) dst[c] = narrow(static_cast<i128>(dst[c]) - static_cast<i128>(q) * src[c]);
  };

  gso_row(0);
  int k = 1;
  long iterations = 0;
  const Real eta(0.51);
  while (k < n) {
    if (++iterations > 10'000'000) throw PrecisionLoss{};
    gso_row(k);
    int passes = 0;
    while (true) {
      bool changed = false;
      for (int j = k - 1; j >= 0; --j) {
        using std::abs;
        using boost::multiprecision::abs;
        if (abs(M(k, j)) <= Real(0.5)) continue;
        const Real qr = rounded(M(k, j));
        if (abs(qr) > Real(4.0e18)) throw PrecisionLoss{};
        const auto q = static_cast<std::int64_t>(static_cast<long long>(qr));
        sub_row(b, k, j, q);
        sub_row(t, k, j, q);
        for (int i = 0; i < j; ++i) M(k, i) -= qr * M(j, i);
        M(k, j) -= qr;
        changed = true;
      }
      if (!changed) break;
      // Recompute from exact data and confirm the reduction held.
      gso_row(k);
      bool reduced = true;
      for (int j = 0; j < k; ++j) {
        using std::abs;
        using boost::multiprecision::abs;
        if (abs(M(k, j)) > eta) reduced = false;
      }
      if (reduced) break;
      if (++passes > 64) throw PrecisionLoss{};
    }
    const Real m = M(k, k - 1);
    if (bstar[static_cast<std::size_t>(k)] >= (Real(delta_lll) - m * m) * bstar[static_cast<std::size_t>(k - 1)]) {
      ++k;
    } else {
      std::swap_ranges(row(b, k), row(b, k) + n, row(b, k - 1));
      std::swap_ranges(row(t, k), row(t, k) + n, row(t, k - 1));
      k = std::max(k - 1, 1);
      if (k == 1) gso_row(0);
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------

LatticeBasis::LatticeBasis(int n, std::vector<std::int64_t> rows) : n_(n), rows_(std::move(rows)) {
  if (n < 1) throw DomainError("LatticeBasis: n must be >= 1");
  if (rows_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
    throw DomainError("LatticeBasis: expected n*n entries");
  det_ = detail::bareiss_determinant(n, rows_);
  if (det_ == 0) throw DomainError("LatticeBasis: rows are linearly dependent");
  BigInt a = abs(det_);
  log_s_ = -std::log(static_cast<double>(a)) / n;
}

double LatticeBasis::covolume_normalizer() const { return std::exp(log_s_); }

bool is_prime_u64(std::uint64_t x) {
  if (x < 2) return false;
  static constexpr std::uint64_t kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t p : kSmall) {
    if (x % p == 0) return x == p;
  }
  auto mulmod = [](std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
  };
  auto powmod = [&](std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1;
    for (a %= m; e != 0; e >>= 1, a = mulmod(a, a, m))
      if (e & 1U) r = mulmod(r, a, m);
    return r;
  };
  std::uint64_t d = x - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1;
    ++s;
  }
  // These bases are deterministic for all 64-bit inputs.
  for (std::uint64_t a : kSmall) {
    std::uint64_t y = powmod(a, d, x);
    if (y == 1 || y == x - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      y = mulmod(y, y, x);
      if (y == x - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

HeckeSample gm_sample(int n, int prime_bits, std::uint64_t seed) {
  if (n < 2) throw DomainError("gm_sample: n must be >= 2");
  if (prime_bits < 20 || prime_bits > 62) throw DomainError("gm_sample: prime_bits must be in [20, 62]");
  Rng rng(seed);
  const std::uint64_t half = std::uint64_t{1} << (prime_bits - 1);
  std::uint64_t p = 0;
  for (int attempt = 0; attempt < 100'000; ++attempt) {
    const std::uint64_t candidate = half | rng.below(half) | 1U;
    if (is_prime_u64(candidate)) {
      p = candidate;
      break;
    }
  }
  if (p == 0) throw InternalError("gm_sample: no prime found within the retry bound");
  HeckeSample out;
  out.p = p;
  std::vector<std::int64_t> rows(static_cast<std::size_t>(n * n), 0);
  rows[0] = static_cast<std::int64_t>(p);
  for (int i = 1; i < n; ++i) {
    const std::uint64_t a = rng.below(p);
    out.a.push_back(a);
    rows[static_cast<std::size_t>(i * n)] = static_cast<std::int64_t>(a);
    rows[static_cast<std::size_t>(i * n + i)] = 1;
  }
  out.basis = LatticeBasis(n, std::move(rows));
  return out;
}

LllResult lll_reduce_with_transform(const LatticeBasis& basis, double delta_lll) {
  if (!(delta_lll > 0.25 && delta_lll < 1.0)) throw DomainError("lll_reduce: delta must be in (1/4, 1)");
  const int n = basis.n();
  std::vector<std::int64_t> identity(static_cast<std::size_t>(n * n), 0);
  for (int i = 0; i < n; ++i) identity[static_cast<std::size_t>(i * n + i)] = 1;

  // Gram-Schmidt on rows with entries near 2^e cancels about 2e bits, so the
  // 64-bit long double mantissa is only tried on small entries.
  std::int64_t max_entry = 0;
  for (std::int64_t v : basis.rows()) max_entry = std::max(max_entry, v < 0 ? -v : v);
  const int first_attempt = max_entry < (std::int64_t{1} << 24) ? 0 : 1;

  LllResult result;
  for (int attempt = first_attempt; attempt < 2; ++attempt) {
    std::vector<std::int64_t> b = basis.rows();
    std::vector<std::int64_t> t = identity;
    try {
      if (attempt == 0)
        lll_pass<long double>(n, b, t, delta_lll);
      else
        lll_pass<Float50>(n, b, t, delta_lll);
    } catch (const PrecisionLoss&) {
      continue;
    }
    result.basis = LatticeBasis(n, std::move(b));
    if (abs(result.basis.determinant()) != abs(basis.determinant()))
      throw InternalError("lll_reduce: determinant changed");
    result.transform = std::move(t);
    result.extended_precision = attempt == 1;
    return result;
  }
  throw InternalError("lll_reduce: Gram-Schmidt lost precision in extended arithmetic");
}

LatticeBasis lll_reduce(const LatticeBasis& basis, double delta_lll) {
  return lll_reduce_with_transform(basis, delta_lll).basis;
}

bool is_lll_reduced(const LatticeBasis& basis, double delta_lll) {
  const int n = basis.n();
  std::vector<long double> mu(static_cast<std::size_t>(n * n), 0), bstar(static_cast<std::size_t>(n), 0);
  std::vector<long double> r(static_cast<std::size_t>(n * n), 0);
  const auto& rows = basis.rows();
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j <= k; ++j) {
      long double s = static_cast<long double>(
          dot(rows.data() + static_cast<std::ptrdiff_t>(k) * n, rows.data() + static_cast<std::ptrdiff_t>(j) * n, n));
      for (int i = 0; i < j; ++i) s -= mu[static_cast<std::size_t>(j * n + i)] * r[static_cast<std::size_t>(k * n + i)];
      r[static_cast<std::size_t>(k * n + j)] = s;
      if (j < k) mu[static_cast<std::size_t>(k * n + j)] = s / bstar[static_cast<std::size_t>(j)];
    }
    bstar[static_cast<std::size_t>(k)] = r[static_cast<std::size_t>(k * n + k)];
    for (int j = 0; j < k; ++j)
      if (std::abs(mu[static_cast<std::size_t>(k * n + j)]) > 0.5L + 1e-9L) return false;
    if (k > 0) {
      const long double m = mu[static_cast<std::size_t>(k * n + k - 1)];
      if (bstar[static_cast<std::size_t>(k)] < (delta_lll - m * m) * bstar[static_cast<std::size_t>(k - 1)] * (1 - 1e-12L))
        return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

namespace {

class Enumerator {
 public:
  Enumerator(const LatticeBasis& basis, std::int64_t radius_sq, std::uint64_t budget)
      : n_(basis.n()),
        rows_(basis.rows()),
        radius_sq_(radius_sq),
        budget_(budget),
        mu_(static_cast<std::size_t>(n_ * n_), 0),
        bstar_(static_cast<std::size_t>(n_), 0),
        x_(static_cast<std::size_t>(n_), 0) {
    std::vector<long double> r(static_cast<std::size_t>(n_ * n_), 0);
    for (int k = 0; k < n_; ++k) {
      for (int j = 0; j <= k; ++j) {
        long double s = static_cast<long double>(dot(row(k), row(j), n_));
        for (int i = 0; i < j; ++i) s -= mu(j, i) * r[static_cast<std::size_t>(k * n_ + i)];
        r[static_cast<std::size_t>(k * n_ + j)] = s;
        if (j < k) mu(k, j) = s / bstar_[static_cast<std::size_t>(j)];
      }
      bstar_[static_cast<std::size_t>(k)] = r[static_cast<std::size_t>(k * n_ + k)];
      if (!(bstar_[static_cast<std::size_t>(k)] > 0)) throw InternalError("enumerate_short: degenerate Gram-Schmidt data");
    }
    // Inflated so that rounding in the floating bounds never prunes a vector
    // inside the radius; accepted vectors are re-checked exactly.
    bound_ = static_cast<long double>(radius_sq) * (1.0L + 1e-9L) + 1e-6L;
  }

  std::vector<std::int64_t> run() {
    search(n_ - 1, 0.0L, true);
    std::sort(found_.begin(), found_.end());
    return found_;
  }

 private:
  const std::int64_t* row(int i) const { return rows_.data() + static_cast<std::ptrdiff_t>(i) * n_; }
  long double& mu(int i, int j) { return mu_[static_cast<std::size_t>(i * n_ + j)]; }

  void search(int level, long double partial, bool higher_zero) {
    long double center = 0;
    for (int i = level + 1; i < n_; ++i) center -= mu(i, level) * x_[static_cast<std::size_t>(i)];
    const long double rem = bound_ - partial;
    if (rem < 0) return;
    const long double half = std::sqrt(rem / bstar_[static_cast<std::size_t>(level)]);
    auto lo = static_cast<std::int64_t>(std::ceil(center - half));
    const auto hi = static_cast<std::int64_t>(std::floor(center + half));
    // One representative per +-pair: the highest nonzero coordinate is positive.
    if (higher_zero) lo = std::max<std::int64_t>(lo, 0);
    for (std::int64_t xi = lo; xi <= hi; ++xi) {
      if (++nodes_ > budget_) {
        std::sort(found_.begin(), found_.end());
        throw EnumerationBudgetExceeded(found_, nodes_);
      }
      x_[static_cast<std::size_t>(level)] = xi;
      const long double d = static_cast<long double>(xi) - center;
      const long double next = partial + d * d * bstar_[static_cast<std::size_t>(level)];
      if (next > bound_) continue;
      if (level == 0) {
        if (higher_zero && xi == 0) continue;
        accept();
      } else {
        search(level - 1, next, higher_zero && xi == 0);
      }
    }
    x_[static_cast<std::size_t>(level)] = 0;
  }

  void accept() {
    i128 norm = 0;
    for (int c = 0; c < n_; ++c) {
      i128 v = 0;
      for (int i = 0; i < n_; ++i) {
        const std::int64_t xi = x_[static_cast<std::size_t>(i)];
        if (xi != 0 && __builtin_add_overflow(v, static_cast<i128>(xi) * row(i)[c], &v))
          throw InternalError("enumerate_short: coordinate overflow");
      }
      if (__builtin_add_overflow(norm, v * v, &norm)) throw InternalError("enumerate_short: norm overflow");
    }
    if (norm <= radius_sq_) found_.push_back(static_cast<std::int64_t>(norm));
  }

  int n_;
  std::vector<std::int64_t> rows_;
  std::int64_t radius_sq_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<long double> mu_;
  std::vector<long double> bstar_;
  std::vector<std::int64_t> x_;
  long double bound_ = 0;
  std::vector<std::int64_t> found_;
};

}  // namespace

std::vector<std::int64_t> enumerate_short(const LatticeBasis& basis, std::int64_t radius_sq,
                                          std::uint64_t node_budget) {
  if (basis.n() < 1) throw DomainError("enumerate_short: empty basis");
  if (radius_sq < 0) throw DomainError("enumerate_short: radius_sq must be nonnegative");
  return Enumerator(basis, radius_sq, node_budget).run();
}

std::int64_t radius_for_volume(const LatticeBasis& basis, double cutoff_volume) {
  if (!(cutoff_volume > 0.0) || !std::isfinite(cutoff_volume))
    throw DomainError("radius_for_volume: cutoff must be positive");
  const int n = basis.n();
  // V = V_n N^(n/2) s^n <= Y  <=>  N <= (Y / V_n)^(2/n) / s^2.
  const long double log_n_max =
      2.0L / n * (std::log(static_cast<long double>(cutoff_volume)) - unit_ball_volume_log(n)) -
      2.0L * basis.log_covolume_normalizer();
  const long double n_max = std::exp(log_n_max) * (1.0L + 1e-12L);
  if (!(n_max < 4.0e18L)) throw DomainError("radius_for_volume: radius exceeds the 64-bit norm range");
  return static_cast<std::int64_t>(std::ceil(n_max));
}

VolumeSpectrum spectrum_from_norms(int n, double log_s, std::vector<std::int64_t> sq_norms, double cutoff_volume) {
  std::sort(sq_norms.begin(), sq_norms.end());
  VolumeSpectrum spec;
  spec.n = n;
  spec.cutoff_volume = cutoff_volume;
  const double log_vn = unit_ball_volume_log(n);
  const double log_y = std::log(cutoff_volume);
  for (std::int64_t q : sq_norms) {
    if (q <= 0) throw DomainError("spectrum_from_norms: squared norms must be positive");
    const double lv = log_vn + 0.5 * n * std::log(static_cast<double>(q)) + n * log_s;
    if (lv > log_y) break;
    spec.sq_norms.push_back(q);
    spec.log_volumes.push_back(lv);
    spec.volumes.push_back(std::exp(lv));
  }
  return spec;
}

VolumeSpectrum volume_spectrum(const LatticeBasis& basis, double cutoff_volume, std::uint64_t node_budget) {
  const LatticeBasis reduced = lll_reduce(basis);
  const std::int64_t radius = radius_for_volume(reduced, cutoff_volume);
  auto norms = enumerate_short(reduced, radius, node_budget);
  return spectrum_from_norms(basis.n(), basis.log_covolume_normalizer(), std::move(norms), cutoff_volume);
}

std::size_t counting_function(const VolumeSpectrum& spec, double t) {
  if (t > spec.cutoff_volume) throw DomainError("counting_function: t beyond the certified cutoff");
  if (t < 0) return 0;
  return static_cast<std::size_t>(std::upper_bound(spec.volumes.begin(), spec.volumes.end(), t) - spec.volumes.begin());
}

}  // namespace epstein
