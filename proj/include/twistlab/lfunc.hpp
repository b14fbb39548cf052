#pragma once

// Central values L(1/2, f x chi_d) from the symmetric approximate functional equation
//   L(1/2) = (1 + eps) * sum_n lambda(n) chi_d(n) n^{-1/2} V(n / sqrt(C)),   C = N d^2,
// with V(y) = Q(k/2, 2 pi y), the regularized upper incomplete gamma function.

#include <optional>
#include <string>

#include "twistlab/arith.hpp"
#include "twistlab/hecke.hpp"

namespace twistlab {

enum class Smoothing { IncompleteGamma };

struct AfeParams {
  double trunc_multiplier = 3.0;
  double rel_tolerance = 1e-8;
  Smoothing smoothing = Smoothing::IncompleteGamma;

  /// Throws ConfigError unless trunc_multiplier >= 1 and 0 < rel_tolerance < 1e-3.
  void validate() const;
};

enum LValueFlag : unsigned {
  kNumericallyVanishing = 1u,  // eps = +1 but |value| <= err_bound
  kToleranceMissed = 2u,       // err_bound > rel_tolerance * max(1, |value|)
  kNegativeAnomaly = 4u,       // value < -err_bound
};

struct LValue {
  double value = 0;
  double err_bound = 0;
  int eps_twist = 1;
  Discriminant d;
  std::string form_label;
  unsigned flags = 0;
  i64 terms = 0;  // truncation length M actually summed

  bool has(LValueFlag f) const { return (flags & f) != 0; }
  /// Distinguishable from zero at working precision.
  bool positive() const { return value > err_bound; }
};

/// N d^2. Throws DomainError when gcd(d, N) > 1.
i64 conductor(const HeckeForm& form, const Discriminant& d);

/// V(y) = Γ(k/2, 2πy) / Γ(k/2) for even k >= 2, y > 0.
double afe_kernel(double y, int k);

/// Certified bound on 2 * (tail over n > M): uses |lambda(n)| <= d(n) <= 2 sqrt(n) and
/// ∫_z^∞ Γ(s,t) dt <= Γ(s+1,z), giving (4 sqrt(C) s / π) Q(s+1, 2πM/sqrt(C)) with s = k/2.
double truncation_error_bound(int weight, double conductor, i64 M);

/// max(ceil(trunc_multiplier * sqrt(C)), smallest M whose tail bound is <= rel_tolerance).
i64 truncation_length(int weight, double conductor, const AfeParams& params);

/// Table size needed to evaluate every twist with |d| <= max_abs_d.
i64 required_table_limit(int weight, i64 level, i64 max_abs_d, const AfeParams& params);

/// Exact 0 when the twisted root number is -1. Throws CapacityError when the eigenvalue
/// table is shorter than the truncation length.
LValue central_value(const HeckeForm& form, const Discriminant& d, const AfeParams& params = {});

/// log of the value when it exceeds its error bound, otherwise none.
std::optional<double> log_central_value(const LValue& v);
std::optional<double> log_central_value(const HeckeForm& form, const Discriminant& d,
                                        const AfeParams& params = {});

std::string flags_string(unsigned flags);

}  // namespace twistlab
