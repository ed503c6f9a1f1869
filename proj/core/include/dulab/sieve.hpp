#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

namespace dulab {

struct PrimePower {
  std::uint64_t p = 0;
  std::uint32_t e = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Complete factorization of n, prime powers sorted by ascending p.
struct Factorization {
  std::uint64_t n = 1;
  std::vector<PrimePower> factors;

  // Factorization of p * this for a prime p (merges exponents).
  Factorization times_prime(std::uint64_t p) const;

  friend bool operator==(const Factorization&, const Factorization&) = default;
};

// Ascending list of all primes <= limit.
class PrimeTable {
 public:
  static PrimeTable build(std::uint64_t limit);

  // Binary cache: "DULAB-PT1", LE u64 limit, LE u64 count, then LE u16 gaps
  // between consecutive primes (the first gap is measured from 0).
  void save(const std::filesystem::path& path) const;
  static PrimeTable load(const std::filesystem::path& path);

  std::uint64_t limit() const { return limit_; }
  std::span<const std::uint64_t> primes() const { return primes_; }
  std::size_t size() const { return primes_.size(); }
  bool is_prime(std::uint64_t n) const;  // requires n <= limit

  // Primes in the half-open range (lo, hi].
  std::span<const std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi) const;

 private:
  PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> primes)
      : limit_(limit), primes_(std::move(primes)) {}

  std::uint64_t limit_ = 0;
  std::vector<std::uint64_t> primes_;
};

// Factorizations of every n in (x_start, x_start + length].
class FactoredWindow {
 public:
  FactoredWindow(std::uint64_t x_start, std::uint64_t length, std::uint64_t ambient_scale,
                 std::vector<std::uint32_t> offsets, std::vector<PrimePower> factors);

  std::uint64_t x_start() const { return x_start_; }
  std::uint64_t length() const { return length_; }
  std::uint64_t ambient_scale() const { return ambient_; }

  // i-th integer of the window, i in [0, length): n = x_start + 1 + i.
  std::uint64_t n_at(std::size_t i) const { return x_start_ + 1 + i; }
  std::span<const PrimePower> factors_at(std::size_t i) const;
  Factorization factorization_at(std::size_t i) const;

  bool contains(std::uint64_t n) const { return n > x_start_ && n - x_start_ <= length_; }
  Factorization factorization_of(std::uint64_t n) const;

 private:
  std::uint64_t x_start_;
  std::uint64_t length_;
  std::uint64_t ambient_;
  std::vector<std::uint32_t> offsets_;  // length_ + 1 entries into factors_
  std::vector<PrimePower> factors_;
};

// Integer square root, floor.
std::uint64_t isqrt(std::uint64_t n);

// Sieves (x, x+H] with every prime <= sqrt(x+H). ambient_scale defaults to x.
FactoredWindow factor_window(std::uint64_t x, std::uint64_t H, const PrimeTable& pt,
                             std::uint64_t ambient_scale = 0);

// Trial-division factorization using the table; requires limit >= sqrt(n).
Factorization factor(std::uint64_t n, const PrimeTable& pt);

// Number of ordered k-tuples with product n. Throws DomainError on k < 1 or
// 64-bit overflow.
std::uint64_t tau_k(std::span<const PrimePower> f, int k);
inline std::uint64_t tau_k(const Factorization& f, int k) { return tau_k(f.factors, k); }

// binomial(e + k - 1, k - 1), overflow checked.
std::uint64_t tau_k_prime_power(std::uint32_t e, int k);

// Sum of tau_{k-1}(m) over divisors m of n with m <= threshold.
std::uint64_t truncated_divisor_sum(std::span<const PrimePower> f, int k,
                                    std::uint64_t threshold);
inline std::uint64_t truncated_divisor_sum(const Factorization& f, int k,
                                           std::uint64_t threshold) {
  return truncated_divisor_sum(f.factors, k, threshold);
}

int big_omega(std::span<const PrimePower> f);
inline int big_omega(const Factorization& f) { return big_omega(f.factors); }

// Distinct primes p | n with lo < p <= hi.
int omega_in(std::span<const PrimePower> f, std::uint64_t lo, std::uint64_t hi);
inline int omega_in(const Factorization& f, std::uint64_t lo, std::uint64_t hi) {
  return omega_in(f.factors, lo, hi);
}

// Visits every divisor m <= bound of n, passing m and its exponent vector
// (aligned with f).
void for_each_divisor(std::span<const PrimePower> f, std::uint64_t bound,
                      const std::function<void(std::uint64_t, std::span<const std::uint32_t>)>& fn);

}  // namespace dulab
