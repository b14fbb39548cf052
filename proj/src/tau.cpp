#include "twistlab/tau.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>

#include "twistlab/error.hpp"

namespace twistlab {

namespace {

using u128 = unsigned __int128;
using Residues = std::array<std::uint32_t, TauSeries::kModuli>;

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t q) {
  std::uint64_t r = 1 % q;
  b %= q;
  while (e) {
    if (e & 1) r = r * b % q;
    b = b * b % q;
    e >>= 1;
  }
  return r;
}

struct Pentagonal {
  std::uint64_t index;   // generalized pentagonal number j
  std::uint64_t weight;  // 25 j
};

// Split by sign of e_j = (-1)^k so the inner loops stay branch-free.
void pentagonal_terms(i64 limit, std::vector<Pentagonal>& plus, std::vector<Pentagonal>& minus) {
  for (i64 k = 1;; ++k) {
    const i64 g1 = k * (3 * k - 1) / 2;
    if (g1 > limit) break;
    auto& bucket = (k % 2 == 0) ? plus : minus;
    bucket.push_back({static_cast<std::uint64_t>(g1), static_cast<std::uint64_t>(25 * g1)});
    const i64 g2 = k * (3 * k + 1) / 2;
    if (g2 <= limit) bucket.push_back({static_cast<std::uint64_t>(g2), static_cast<std::uint64_t>(25 * g2)});
  }
  auto by_index = [](const Pentagonal& a, const Pentagonal& b) { return a.index < b.index; };
  std::sort(plus.begin(), plus.end(), by_index);
  std::sort(minus.begin(), minus.end(), by_index);
}

mpz_class reconstruct(const Residues& r) {
  // Garner mixed-radix digits, then symmetric lift into (-M/2, M/2].
  constexpr auto& q = TauSeries::kPrimes;
  std::array<std::uint64_t, TauSeries::kModuli> v{};
  for (std::size_t i = 0; i < q.size(); ++i) {
    std::uint64_t x = r[i];
    std::uint64_t prod = 1;
    std::uint64_t acc = 0;  // v_0 + v_1 q_0 + ... mod q_i
    for (std::size_t j = 0; j < i; ++j) {
      acc = (acc + v[j] * prod) % q[i];
      prod = prod * (q[j] % q[i]) % q[i];
    }
    x = (x + q[i] - acc) % q[i];
    v[i] = x * pow_mod(prod, q[i] - 2, q[i]) % q[i];
  }
  mpz_class value = 0, radix = 1;
  for (std::size_t i = 0; i < q.size(); ++i) {
    value += radix * mpz_class(static_cast<unsigned long>(v[i]));
    radix *= static_cast<unsigned long>(q[i]);
  }
  if (2 * value > radix) value -= radix;
  return value;
}

}  // namespace

TauSeries::TauSeries(i64 limit) : limit_(limit) {
  if (limit < 1) throw DomainError("TauSeries: limit must be >= 1");
  if (limit > kTauCeiling)
    throw CapacityError("tau_table: limit " + std::to_string(limit) + " exceeds ceiling " +
                        std::to_string(kTauCeiling));
  const auto len = static_cast<std::size_t>(limit);  // g_0 .. g_{limit-1}
  residues_.assign(len, Residues{});
  residues_[0].fill(1u);

  std::vector<Pentagonal> plus, minus;
  pentagonal_terms(limit, plus, minus);

  // inverses of 1..len-1 modulo each prime: inv[i] = -(q / i) * inv[q mod i]
  std::vector<Residues> inv(len > 1 ? len : 2);
  for (std::size_t t = 0; t < kModuli; ++t) {
    const std::uint64_t q = kPrimes[t];
    inv[1][t] = 1;
    for (std::size_t i = 2; i < len; ++i)
      inv[i][t] = static_cast<std::uint32_t>((q - (q / i) * inv[q % i][t] % q) % q);
  }

  for (std::size_t m = 1; m < len; ++m) {
    std::array<u128, kModuli> s1p{}, s1m{};
    std::array<std::uint64_t, kModuli> s2p{}, s2m{};
    for (const auto& pt : plus) {
      if (pt.index > m) break;
      const auto& g = residues_[m - pt.index];
      for (std::size_t t = 0; t < kModuli; ++t) {
        s1p[t] += static_cast<u128>(g[t]) * pt.weight;
        s2p[t] += g[t];
      }
    }
    for (const auto& pt : minus) {
      if (pt.index > m) break;
      const auto& g = residues_[m - pt.index];
      for (std::size_t t = 0; t < kModuli; ++t) {
        s1m[t] += static_cast<u128>(g[t]) * pt.weight;
        s2m[t] += g[t];
      }
    }
    for (std::size_t t = 0; t < kModuli; ++t) {
      const std::uint64_t q = kPrimes[t];
      const std::uint64_t s1 = (static_cast<std::uint64_t>(s1p[t] % q) + q - static_cast<std::uint64_t>(s1m[t] % q)) % q;
      const std::uint64_t s2 = (s2p[t] % q + q - s2m[t] % q) % q;
      const std::uint64_t num = (s1 + q - (m % q) * s2 % q) % q;
      residues_[m][t] = static_cast<std::uint32_t>(num * inv[m][t] % q);
    }
  }
}

std::string TauSeries::decimal(i64 n) const {
  if (n < 1 || n > limit_) throw CapacityError("tau: n outside [1, limit]");
  return reconstruct(residues_[static_cast<std::size_t>(n - 1)]).get_str();
}

i64 TauSeries::value_i64(i64 n) const {
  if (n < 1 || n > limit_) throw CapacityError("tau: n outside [1, limit]");
  const mpz_class v = reconstruct(residues_[static_cast<std::size_t>(n - 1)]);
  if (!v.fits_slong_p()) throw CapacityError("tau(" + std::to_string(n) + ") exceeds 64 bits");
  return v.get_si();
}

double TauSeries::normalized(i64 n) const {
  if (n < 1 || n > limit_) throw CapacityError("tau: n outside [1, limit]");
  const mpz_class v = reconstruct(residues_[static_cast<std::size_t>(n - 1)]);
  const long double nn = static_cast<long double>(n);
  const long double scale = nn * nn * nn * nn * nn * std::sqrt(nn);
  return static_cast<double>(static_cast<long double>(v.get_d()) / scale);
}

EigenvalueTable tau_table(i64 limit) {
  const TauSeries series(limit);
  const auto primes = sieve_primes(limit).primes;
  std::vector<double> values;
  values.reserve(primes.size());
  for (i64 p : primes) values.push_back(series.normalized(p));
  return EigenvalueTable(FormInfo{"Delta", 12, 1, 1, EigenSource::TauRecurrence}, limit, values);
}

}  // namespace twistlab
