#pragma once

// Elliptic curves over Q in long Weierstrass form and their Frobenius traces.

#include <filesystem>
#include <map>
#include <string>

#include "twistlab/arith.hpp"
#include "twistlab/hecke.hpp"

namespace twistlab {

inline constexpr i64 kPointCountCeiling = 10'000'000;

struct EllipticCurveSpec {
  std::string label;
  i64 a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;
  i64 conductor = 1;
  int torsion_order = 1;
  double real_period = 0;  // Omega^+ (times the number of real components)
  double imag_period = 0;  // Omega^-, the period attached to twists by d < 0
  int root_number = 1;
  std::map<i64, int> tamagawa;  // c_p(E), p | N
  std::map<i64, int> bad_ap;    // a_p at p | N (U_p eigenvalue, in {-1, 0, 1})

  i64 b2() const { return a1 * a1 + 4 * a2; }
  i64 b4() const { return 2 * a4 + a1 * a3; }
  i64 b6() const { return a3 * a3 + 4 * a6; }
  i64 b8() const { return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4; }
  i64 c4() const { return b2() * b2() - 24 * b4(); }
  i64 c6() const { return -b2() * b2() * b2() + 36 * b2() * b4() - 216 * b6(); }
  /// Minimal discriminant; throws DomainError on 64-bit overflow.
  i64 discriminant() const;

  bool has_good_reduction(i64 p) const { return discriminant() % p != 0; }
};

/// key=value curve metadata (a1..a6, conductor, torsion, real_period, imag_period, root_number,
/// tamagawa_<p>, bad_ap_<p>). Validates discriminant and bad-prime data against the conductor.
EllipticCurveSpec read_curve_file(const std::filesystem::path& path);
EllipticCurveSpec parse_curve(const std::string& text, const std::string& source_name);

/// p + 1 - #E(F_p) for a prime of good reduction. Naive count below the switch-over,
/// baby-step giant-step on point orders above it. Throws DomainError at bad primes.
i64 ap_point_count(const EllipticCurveSpec& curve, i64 p);

/// Direct O(p) count over all x, valid at every prime; at bad primes it counts the
/// singular point too, which yields the U_p eigenvalue. Serial reference.
i64 ap_naive(const EllipticCurveSpec& curve, i64 p);

/// Mestre-style group-order determination on E and its quadratic twist; p >= 5, good reduction.
i64 ap_bsgs(const EllipticCurveSpec& curve, i64 p);

/// Weight-2 newform attached to the curve, lambda(p) = a_p / sqrt(p), p <= limit.
EigenvalueTable curve_table(const EllipticCurveSpec& curve, i64 limit);

}  // namespace twistlab
