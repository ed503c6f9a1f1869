#include "dulab/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "dulab/error.hpp"

namespace dulab {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

Factorization Factorization::times_prime(u64 p) const {
  Factorization out;
  if (n > UINT64_MAX / p) throw DomainError("times_prime: product overflows 64 bits");
  out.n = n * p;
  out.factors = factors;
  auto it = std::lower_bound(out.factors.begin(), out.factors.end(), p,
                             [](const PrimePower& pp, u64 v) { return pp.p < v; });
  if (it != out.factors.end() && it->p == p) {
    ++it->e;
  } else {
    out.factors.insert(it, PrimePower{p, 1});
  }
  return out;
}

// ---------------------------------------------------------------------------
// PrimeTable

PrimeTable PrimeTable::build(u64 limit) {
  if (limit < 2) throw DomainError("build_prime_table: limit must be >= 2, got " + std::to_string(limit));
  // odd-only sieve: index i <-> 2i+1
  const u64 half = (limit - 1) / 2 + 1;
  std::vector<std::uint8_t> composite(half, 0);
  composite[0] = 1;  // 1 is not prime
  for (u64 i = 1; (2 * i + 1) * (2 * i + 1) <= limit; ++i) {
    if (composite[i]) continue;
    const u64 p = 2 * i + 1;
    for (u64 j = (p * p) / 2; j < half; j += p) composite[j] = 1;
  }
  std::vector<u64> primes;
  primes.reserve(static_cast<std::size_t>(1.26 * static_cast<double>(limit) /
                                          std::max(1.0, std::log(static_cast<double>(limit)))) + 8);
  primes.push_back(2);
  for (u64 i = 1; i < half; ++i) {
    if (!composite[i]) primes.push_back(2 * i + 1);
  }
  return PrimeTable(limit, std::move(primes));
}

bool PrimeTable::is_prime(u64 n) const {
  if (n > limit_) throw DomainError("is_prime: " + std::to_string(n) + " exceeds table limit");
  return std::binary_search(primes_.begin(), primes_.end(), n);
}

std::span<const u64> PrimeTable::primes_in(u64 lo, u64 hi) const {
  if (lo >= hi) return {};
  auto b = std::upper_bound(primes_.begin(), primes_.end(), lo);
  auto e = std::upper_bound(b, primes_.end(), hi);
  return {b, e};
}

namespace {

constexpr char kCacheMagic[] = "DULAB-PT1";
constexpr std::size_t kCacheMagicLen = sizeof(kCacheMagic) - 1;

void put_le64(std::ostream& os, u64 v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 8);
}

u64 get_le64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw DomainError("prime cache: truncated header");
  u64 v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

}  // namespace

void PrimeTable::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DomainError("prime cache: cannot open " + path.string() + " for writing");
  os.write(kCacheMagic, kCacheMagicLen);
  put_le64(os, limit_);
  put_le64(os, primes_.size());
  u64 prev = 0;
  for (u64 p : primes_) {
    const u64 gap = p - prev;
    if (gap > 0xffff) throw InvariantViolation("prime cache: gap exceeds 16 bits");
    const char b[2] = {static_cast<char>(gap & 0xff), static_cast<char>(gap >> 8)};
    os.write(b, 2);
    prev = p;
  }
  if (!os) throw DomainError("prime cache: write failed for " + path.string());
}

PrimeTable PrimeTable::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DomainError("prime cache: cannot open " + path.string());
  char magic[kCacheMagicLen];
  if (!is.read(magic, kCacheMagicLen) || std::string(magic, kCacheMagicLen) != kCacheMagic) {
    throw DomainError("prime cache: bad magic in " + path.string());
  }
  const u64 limit = get_le64(is);
  const u64 count = get_le64(is);
  std::vector<u64> primes;
  primes.reserve(count);
  u64 prev = 0;
  for (u64 i = 0; i < count; ++i) {
    unsigned char b[2];
    if (!is.read(reinterpret_cast<char*>(b), 2)) throw DomainError("prime cache: truncated body");
    prev += static_cast<u64>(b[0]) | (static_cast<u64>(b[1]) << 8);
    primes.push_back(prev);
  }
  if (!primes.empty() && primes.back() > limit) throw DomainError("prime cache: prime above limit");
  return PrimeTable(limit, std::move(primes));
}

// ---------------------------------------------------------------------------
// FactoredWindow

FactoredWindow::FactoredWindow(u64 x_start, u64 length, u64 ambient_scale,
                               std::vector<std::uint32_t> offsets, std::vector<PrimePower> factors)
    : x_start_(x_start),
      length_(length),
      ambient_(ambient_scale),
      offsets_(std::move(offsets)),
      factors_(std::move(factors)) {
  if (offsets_.size() != length_ + 1) throw InvariantViolation("FactoredWindow: offset table size mismatch");
}

std::span<const PrimePower> FactoredWindow::factors_at(std::size_t i) const {
  return std::span<const PrimePower>(factors_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
}

Factorization FactoredWindow::factorization_at(std::size_t i) const {
  auto f = factors_at(i);
  return Factorization{n_at(i), std::vector<PrimePower>(f.begin(), f.end())};
}

Factorization FactoredWindow::factorization_of(u64 n) const {
  if (!contains(n)) throw DomainError("FactoredWindow: " + std::to_string(n) + " outside window");
  return factorization_at(static_cast<std::size_t>(n - x_start_ - 1));
}

FactoredWindow factor_window(u64 x, u64 H, const PrimeTable& pt, u64 ambient_scale) {
  if (H < 1) throw DomainError("factor_window: H must be >= 1");
  if (x < 1) throw DomainError("factor_window: x must be >= 1");
  if (x > UINT64_MAX - H) throw DomainError("factor_window: x + H overflows 64 bits");
  const u64 top = x + H;
  const u64 need = isqrt(top);
  if (pt.limit() < need) {
    throw PreconditionError("factor_window: prime table limit " + std::to_string(pt.limit()) +
                            " too small; need limit >= " + std::to_string(need));
  }
  if (H > std::numeric_limits<std::uint32_t>::max() / 16) throw DomainError("factor_window: window too long");

  auto sieve_primes = pt.primes_in(0, need);
  const std::size_t len = static_cast<std::size_t>(H);

  // Pass 1: count distinct sieving primes per n (one extra slot for a
  // possible large cofactor).
  std::vector<std::uint32_t> count(len, 1);
  for (u64 p : sieve_primes) {
    u64 first = ((x / p) + 1) * p;  // smallest multiple > x
    for (u64 m = first; m <= top; m += p) ++count[m - x - 1];
  }
  std::vector<std::uint32_t> slot(len + 1, 0);
  for (std::size_t i = 0; i < len; ++i) slot[i + 1] = slot[i] + count[i];

  std::vector<PrimePower> scratch(slot[len]);
  std::vector<std::uint32_t> fill(len, 0);
  std::vector<u64> rem(len);
  for (std::size_t i = 0; i < len; ++i) rem[i] = x + 1 + i;

  // Pass 2: strip each prime from its multiples.
  for (u64 p : sieve_primes) {
    for (u64 m = ((x / p) + 1) * p; m <= top; m += p) {
      const std::size_t i = static_cast<std::size_t>(m - x - 1);
      std::uint32_t e = 0;
      while (rem[i] % p == 0) {
        rem[i] /= p;
        ++e;
      }
      scratch[slot[i] + fill[i]++] = PrimePower{p, e};
    }
  }

  std::vector<std::uint32_t> offsets(len + 1, 0);
  std::vector<PrimePower> factors;
  factors.reserve(scratch.size());
  for (std::size_t i = 0; i < len; ++i) {
    for (std::uint32_t j = 0; j < fill[i]; ++j) factors.push_back(scratch[slot[i] + j]);
    if (rem[i] > 1) factors.push_back(PrimePower{rem[i], 1});
    offsets[i + 1] = static_cast<std::uint32_t>(factors.size());
  }
  return FactoredWindow(x, H, ambient_scale == 0 ? x : ambient_scale, std::move(offsets),
                        std::move(factors));
}

Factorization factor(u64 n, const PrimeTable& pt) {
  if (n == 0) throw DomainError("factor: n must be >= 1");
  const u64 need = isqrt(n);
  if (pt.limit() < need) {
    throw PreconditionError("factor: prime table limit " + std::to_string(pt.limit()) +
                            " too small; need limit >= " + std::to_string(need));
  }
  Factorization f;
  f.n = n;
  u64 rem = n;
  for (u64 p : pt.primes()) {
    if (static_cast<u128>(p) * p > rem) break;
    if (rem % p) continue;
    std::uint32_t e = 0;
    while (rem % p == 0) {
      rem /= p;
      ++e;
    }
    f.factors.push_back({p, e});
  }
  if (rem > 1) f.factors.push_back({rem, 1});
  return f;
}

// ---------------------------------------------------------------------------
// Divisor functions

u64 tau_k_prime_power(std::uint32_t e, int k) {
  if (k < 1) throw DomainError("tau_k: k must be >= 1, got " + std::to_string(k));
  // binomial(e + k - 1, e) built as prod_{i=1..e} (k-1+i)/i; each prefix is
  // itself a binomial coefficient, so the division is exact.
  u128 c = 1;
  for (std::uint32_t i = 1; i <= e; ++i) {
    c = c * static_cast<u128>(static_cast<u64>(k) - 1 + i) / i;
    if (c > UINT64_MAX) throw DomainError("tau_k: prime-power value overflows 64 bits");
  }
  return static_cast<u64>(c);
}

u64 tau_k(std::span<const PrimePower> f, int k) {
  if (k < 1) throw DomainError("tau_k: k must be >= 1, got " + std::to_string(k));
  u64 out = 1;
  for (const auto& pp : f) {
    if (__builtin_mul_overflow(out, tau_k_prime_power(pp.e, k), &out)) {
      throw DomainError("tau_k: value overflows 64 bits");
    }
  }
  return out;
}

namespace {

struct TruncatedSum {
  std::span<const PrimePower> f;
  int k_minus_1;
  u64 threshold;
  u64 total = 0;

  void walk(std::size_t idx, u64 m, u64 w) {
    if (idx == f.size() || m > threshold / f[idx].p) {
      // no further prime fits under the threshold
      if (__builtin_add_overflow(total, w, &total)) throw DomainError("truncated_divisor_sum: overflow");
      return;
    }
    walk(idx + 1, m, w);
    u64 mm = m;
    for (std::uint32_t e = 1; e <= f[idx].e; ++e) {
      if (mm > threshold / f[idx].p) break;
      mm *= f[idx].p;
      u64 we = 0;
      if (__builtin_mul_overflow(w, tau_k_prime_power(e, k_minus_1), &we)) {
        throw DomainError("truncated_divisor_sum: overflow");
      }
      walk(idx + 1, mm, we);
    }
  }
};

}  // namespace

u64 truncated_divisor_sum(std::span<const PrimePower> f, int k, u64 threshold) {
  if (k < 2) throw DomainError("truncated_divisor_sum: k must be >= 2, got " + std::to_string(k));
  if (threshold < 1) throw DomainError("truncated_divisor_sum: threshold must be >= 1");
  TruncatedSum s{f, k - 1, threshold};
  s.walk(0, 1, 1);
  return s.total;
}

int big_omega(std::span<const PrimePower> f) {
  int total = 0;
  for (const auto& pp : f) total += static_cast<int>(pp.e);
  return total;
}

int omega_in(std::span<const PrimePower> f, u64 lo, u64 hi) {
  if (lo >= hi) {
    throw DomainError("omega_in: need lo < hi, got (" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  int count = 0;
  for (const auto& pp : f) {
    if (pp.p > lo && pp.p <= hi) ++count;
  }
  return count;
}

void for_each_divisor(std::span<const PrimePower> f, u64 bound,
                      const std::function<void(u64, std::span<const std::uint32_t>)>& fn) {
  std::vector<std::uint32_t> exps(f.size(), 0);
  auto rec = [&](auto&& self, std::size_t idx, u64 m) -> void {
    if (idx == f.size()) {
      fn(m, exps);
      return;
    }
    self(self, idx + 1, m);
    u64 mm = m;
    for (std::uint32_t e = 1; e <= f[idx].e; ++e) {
      if (mm > bound / f[idx].p) break;
      mm *= f[idx].p;
      exps[idx] = e;
      self(self, idx + 1, mm);
    }
    exps[idx] = 0;
  };
  rec(rec, 0, 1);
}

}  // namespace dulab
