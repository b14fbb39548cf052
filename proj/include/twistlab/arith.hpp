#pragma once

// Integer substrate: primes, the Kronecker symbol and fundamental-discriminant
// families d ≡ a (mod N0) with D <= sigma*d <= 2D.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace twistlab {

using i64 = std::int64_t;
using u64 = std::uint64_t;

struct PrimeTable {
  i64 limit = 0;
  std::vector<i64> primes;  // all primes <= limit, ascending

  bool empty() const { return primes.empty(); }
  std::size_t size() const { return primes.size(); }
  /// Number of primes <= x (x may exceed nothing beyond `limit`).
  std::size_t count_up_to(double x) const;
};

/// Eratosthenes. Throws DomainError when limit < 2.
PrimeTable sieve_primes(i64 limit);

/// Smallest prime factor for every n <= limit (spf[0] = spf[1] = 0).
class FactorTable {
 public:
  explicit FactorTable(i64 limit);
  i64 limit() const { return static_cast<i64>(spf_.size()) - 1; }
  std::uint32_t spf(i64 n) const { return spf_[static_cast<std::size_t>(n)]; }
  bool is_prime(i64 n) const { return n >= 2 && spf_[static_cast<std::size_t>(n)] == n; }

 private:
  std::vector<std::uint32_t> spf_;
};

i64 gcd(i64 a, i64 b);
i64 lcm(i64 a, i64 b);
i64 isqrt(i64 n);
/// Nonnegative residue of a modulo m (m > 0).
inline i64 mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

/// Kronecker symbol (d/n) for all integers d, n.
int kronecker(i64 d, i64 n);

bool is_squarefree(i64 n);

/// d = 1, or d ≡ 1 (mod 4) squarefree, or d = 4m with m ≡ 2,3 (mod 4) squarefree.
/// Throws DomainError for d = 0.
bool is_fundamental(i64 d);

/// All squarefree n in [lo, hi], sieving by p^2 for p <= sqrt(hi).
std::vector<i64> squarefree_sieve(i64 lo, i64 hi);

struct Discriminant {
  i64 d = 1;
  int sigma = 1;
  i64 absval = 1;

  /// Validates that d is fundamental (or 1).
  static Discriminant make(i64 d);
  friend bool operator==(const Discriminant&, const Discriminant&) = default;
};

struct FamilySlice {
  i64 D = 0;
  int sigma = 1;
  i64 a = 1;
  i64 N0 = 8;
  std::vector<Discriminant> members;  // ascending |d|

  std::size_t size() const { return members.size(); }
};

/// Throws ConfigError naming the first violated condition.
void validate_family_params(i64 D, int sigma, i64 a, i64 N0);

/// Members d with D <= sigma*d <= 2D, |d| squarefree, d ≡ a (mod N0). d = 1 is never a member.
FamilySlice enumerate_family(i64 D, int sigma, i64 a, i64 N0);

/// Streaming variant for large D: a segmented sieve over [D, 2D]; callback sees ascending |d|.
void for_each_family_member(i64 D, int sigma, i64 a, i64 N0,
                            const std::function<void(const Discriminant&)>& fn);

/// Values of the character n -> kronecker(d, n) for n in [0, |d|); periodic for fundamental d.
std::vector<std::int8_t> character_table(const Discriminant& d);

}  // namespace twistlab
