#pragma once

// Ramanujan tau from the pentagonal-number recurrence for
//   q * prod_{n>=1} (1 - q^n)^24 = sum tau(n) q^n.
// With P = prod (1 - q^n) = sum e_j q^j (Euler's pentagonal series) and G = P^24 = sum g_n q^n,
// logarithmic differentiation gives  n g_n = sum_{j>=1} e_j g_{n-j} (25 j - n),  tau(n) = g_{n-1}.
// The recurrence runs modulo five primes below 2^31; CRT recovers tau(n) exactly.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "twistlab/arith.hpp"
#include "twistlab/hecke.hpp"

namespace twistlab {

inline constexpr i64 kTauCeiling = 10'000'000;

class TauSeries {
 public:
  static constexpr std::size_t kModuli = 5;
  static constexpr std::array<std::uint32_t, kModuli> kPrimes = {2147483647u, 2147483629u, 2147483587u,
                                                                 2147483579u, 2147483563u};

  /// tau(n) for 1 <= n <= limit. Throws CapacityError above kTauCeiling.
  explicit TauSeries(i64 limit);

  i64 limit() const { return limit_; }
  /// Exact decimal representation.
  std::string decimal(i64 n) const;
  /// Exact value; throws CapacityError when it does not fit in 64 bits.
  i64 value_i64(i64 n) const;
  /// tau(n) / n^{11/2}.
  double normalized(i64 n) const;

 private:
  i64 limit_;
  std::vector<std::array<std::uint32_t, kModuli>> residues_;  // index n - 1 holds g_{n-1}
};

/// Level-1 weight-12 form Delta with eigenvalues tau(p)/p^{11/2}, p <= limit.
EigenvalueTable tau_table(i64 limit);

}  // namespace twistlab
