#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

namespace stconv {

/// Sieve of Eratosthenes over [0, limit]. Immutable once built.
class PrimeTable {
 public:
  explicit PrimeTable(std::uint64_t limit) : limit_(limit), composite_(limit + 1, false) {
    composite_[0] = true;
    if (limit >= 1) composite_[1] = true;
    for (std::uint64_t i = 2; i * i <= limit; ++i) {
      if (composite_[i]) continue;
      for (std::uint64_t j = i * i; j <= limit; j += i) composite_[j] = true;
    }
    for (std::uint64_t i = 2; i <= limit; ++i)
      if (!composite_[i]) primes_.push_back(i);
  }

  std::uint64_t limit() const noexcept { return limit_; }

  bool is_prime(std::uint64_t n) const { return n <= limit_ && !composite_[n]; }

  /// pi(n) for n <= limit.
  std::uint64_t count_upto(std::uint64_t n) const {
    return static_cast<std::uint64_t>(
        std::upper_bound(primes_.begin(), primes_.end(), n) - primes_.begin());
  }

  const std::vector<std::uint64_t>& primes() const noexcept { return primes_; }

 private:
  std::uint64_t limit_;
  std::vector<bool> composite_;
  std::vector<std::uint64_t> primes_;
};

namespace detail {

struct PrimeCache {
  std::mutex mutex;
  std::shared_ptr<const PrimeTable> table = std::make_shared<PrimeTable>(1 << 16);
};

inline PrimeCache& prime_cache() {
  static PrimeCache cache;
  return cache;
}

}  // namespace detail

/// Shared sieve covering at least [0, n]. Grows geometrically; old tables stay
/// valid for holders of the returned pointer.
inline std::shared_ptr<const PrimeTable> prime_table(std::uint64_t n) {
  auto& cache = detail::prime_cache();
  std::lock_guard lock(cache.mutex);
  if (cache.table->limit() < n) {
    std::uint64_t limit = std::max(n, 2 * cache.table->limit());
    cache.table = std::make_shared<PrimeTable>(limit);
  }
  return cache.table;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  // Beyond the sieve reach fall back to trial division rather than growing
  // the table for one-off queries.
  if (n > (std::uint64_t{1} << 27)) {
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
      if (n % d == 0) return false;
    return true;
  }
  return prime_table(n)->is_prime(n);
}

inline std::uint64_t prime_count(std::uint64_t n) { return prime_table(n)->count_upto(n); }

/// The k-th prime, 1-based (nth_prime(1) == 2).
inline std::uint64_t nth_prime(std::uint64_t k) {
  std::uint64_t limit = 1 << 16;
  for (;;) {
    auto table = prime_table(limit);
    if (table->primes().size() >= k) return table->primes()[k - 1];
    limit = table->limit() * 2;
  }
}

}  // namespace stconv
