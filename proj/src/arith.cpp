#include "twistlab/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "twistlab/error.hpp"

namespace twistlab {

std::size_t PrimeTable::count_up_to(double x) const {
  auto it = std::upper_bound(primes.begin(), primes.end(), x,
                             [](double v, i64 p) { return v < static_cast<double>(p); });
  return static_cast<std::size_t>(it - primes.begin());
}

PrimeTable sieve_primes(i64 limit) {
  if (limit < 2) throw DomainError("sieve_primes: limit < 2 gives an empty prime table");
  std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
  PrimeTable table;
  table.limit = limit;
  for (i64 p = 2; p <= limit; ++p) {
    if (composite[static_cast<std::size_t>(p)]) continue;
    table.primes.push_back(p);
    for (i64 m = p * p; m <= limit; m += p) composite[static_cast<std::size_t>(m)] = true;
  }
  return table;
}

FactorTable::FactorTable(i64 limit) : spf_(static_cast<std::size_t>(std::max<i64>(limit, 1)) + 1, 0) {
  std::vector<std::uint32_t> primes;
  const auto n_max = static_cast<std::uint64_t>(spf_.size() - 1);
  for (std::uint64_t n = 2; n <= n_max; ++n) {
    if (spf_[n] == 0) {
      spf_[n] = static_cast<std::uint32_t>(n);
      primes.push_back(static_cast<std::uint32_t>(n));
    }
    for (std::uint32_t p : primes) {
      const std::uint64_t m = n * p;
      if (p > spf_[n] || m > n_max) break;
      spf_[m] = p;
    }
  }
}

i64 gcd(i64 a, i64 b) { return std::gcd(a, b); }

i64 lcm(i64 a, i64 b) { return std::lcm(a, b); }

i64 isqrt(i64 n) {
  if (n <= 0) return 0;
  auto r = static_cast<i64>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

int kronecker(i64 a, i64 b) {
  // (2/n) indexed by n mod 8
  static constexpr int kTab2[8] = {0, 1, 0, -1, 0, -1, 0, 1};
  if (b == 0) return (a == 1 || a == -1) ? 1 : 0;
  if ((a & 1) == 0 && (b & 1) == 0) return 0;
  int v = 0;
  while ((b & 1) == 0) {
    ++v;
    b /= 2;
  }
  int k = (v % 2 == 0) ? 1 : kTab2[a & 7];
  if (b < 0) {
    b = -b;
    if (a < 0) k = -k;
  }
  while (true) {
    if (a == 0) return b > 1 ? 0 : k;
    v = 0;
    while ((a & 1) == 0) {
      ++v;
      a /= 2;
    }
    if (v % 2 == 1) k *= kTab2[b & 7];
    if (a & b & 2) k = -k;
    const i64 r = a < 0 ? -a : a;
    a = b % r;
    b = r;
  }
}

bool is_squarefree(i64 n) {
  if (n < 0) n = -n;
  if (n == 0) return false;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return false;
  }
  return true;
}

bool is_fundamental(i64 d) {
  if (d == 0) throw DomainError("is_fundamental: d = 0 is not a discriminant");
  if (d == 1) return true;
  const i64 r = mod(d, 4);
  if (r == 1) return is_squarefree(d);
  if (r != 0) return false;
  const i64 m = d / 4;
  const i64 rm = mod(m, 4);
  return (rm == 2 || rm == 3) && is_squarefree(m);
}

std::vector<i64> squarefree_sieve(i64 lo, i64 hi) {
  if (lo < 1 || hi < lo) throw DomainError("squarefree_sieve: need 1 <= lo <= hi");
  const auto len = static_cast<std::size_t>(hi - lo + 1);
  std::vector<bool> bad(len, false);
  if (hi >= 4) {
    for (i64 p : sieve_primes(isqrt(hi)).primes) {
      const i64 sq = p * p;
      for (i64 m = ((lo + sq - 1) / sq) * sq; m <= hi; m += sq) bad[static_cast<std::size_t>(m - lo)] = true;
    }
  }
  std::vector<i64> out;
  for (std::size_t i = 0; i < len; ++i)
    if (!bad[i]) out.push_back(lo + static_cast<i64>(i));
  return out;
}

Discriminant Discriminant::make(i64 d) {
  if (!is_fundamental(d)) throw DomainError("not a fundamental discriminant: " + std::to_string(d));
  return Discriminant{d, d > 0 ? 1 : -1, d > 0 ? d : -d};
}

void validate_family_params(i64 D, int sigma, i64 a, i64 N0) {
  if (D < 2) throw ConfigError("family: D >= 2 required");
  if (sigma != 1 && sigma != -1) throw ConfigError("family: sigma must be +1 or -1");
  if (N0 <= 0 || N0 % 8 != 0) throw ConfigError("family: 8 | N0 required");
  if (mod(a, 4) != 1) throw ConfigError("family: a ≡ 1 (mod 4) required");
  if (gcd(mod(a, N0), N0) != 1) throw ConfigError("family: gcd(a, N0) = 1 required");
}

void for_each_family_member(i64 D, int sigma, i64 a, i64 N0,
                            const std::function<void(const Discriminant&)>& fn) {
  validate_family_params(D, sigma, a, N0);
  const i64 lo = D;
  const i64 hi = 2 * D;
  // sigma*|d| ≡ a  <=>  |d| ≡ sigma*a (mod N0)
  const i64 target = mod(sigma * a, N0);
  const PrimeTable small = sieve_primes(std::max<i64>(2, isqrt(hi)));
  constexpr i64 kBlock = i64{1} << 20;
  std::vector<bool> bad;
  for (i64 start = lo; start <= hi; start += kBlock) {
    const i64 stop = std::min(hi, start + kBlock - 1);
    bad.assign(static_cast<std::size_t>(stop - start + 1), false);
    for (i64 p : small.primes) {
      const i64 sq = p * p;
      if (sq > stop) break;
      for (i64 m = ((start + sq - 1) / sq) * sq; m <= stop; m += sq) bad[static_cast<std::size_t>(m - start)] = true;
    }
    i64 n = start + mod(target - start, N0);
    for (; n <= stop; n += N0) {
      if (bad[static_cast<std::size_t>(n - start)]) continue;
      const i64 d = sigma * n;
      if (d == 1) continue;
      // d ≡ 1 (mod 4) and squarefree, hence fundamental
      fn(Discriminant{d, sigma, n});
    }
  }
}

FamilySlice enumerate_family(i64 D, int sigma, i64 a, i64 N0) {
  FamilySlice slice{D, sigma, a, N0, {}};
  slice.members.reserve(static_cast<std::size_t>(D / N0 + 1));
  for_each_family_member(D, sigma, a, N0, [&](const Discriminant& d) { slice.members.push_back(d); });
  return slice;
}

std::vector<std::int8_t> character_table(const Discriminant& disc) {
  const i64 m = disc.absval;
  std::vector<std::int8_t> chi(static_cast<std::size_t>(m), 0);
  if (m == 1) {
    chi[0] = 1;
    return chi;
  }
  chi[1] = 1;
  std::vector<std::uint32_t> spf(static_cast<std::size_t>(m), 0);
  std::vector<std::uint32_t> primes;
  for (i64 n = 2; n < m; ++n) {
    const auto un = static_cast<std::size_t>(n);
    if (spf[un] == 0) {
      spf[un] = static_cast<std::uint32_t>(n);
      primes.push_back(static_cast<std::uint32_t>(n));
      chi[un] = static_cast<std::int8_t>(kronecker(disc.d, n));
    } else {
      const auto p = spf[un];
      chi[un] = static_cast<std::int8_t>(chi[p] * chi[un / p]);
    }
    for (std::uint32_t p : primes) {
      const i64 q = n * static_cast<i64>(p);
      if (p > spf[un] || q >= m) break;
      spf[static_cast<std::size_t>(q)] = p;
    }
  }
  return chi;
}

}  // namespace twistlab
