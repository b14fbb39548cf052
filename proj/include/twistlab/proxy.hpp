#pragma once

// Short prime sums standing in for log L(1/2, f x chi_d): the smoothed log-majorant,
// the weighted Dirichlet polynomial P(d; x, y) and the coefficient sums behind its variance.

#include <vector>

#include "twistlab/arith.hpp"
#include "twistlab/hecke.hpp"

namespace twistlab {

struct WeightedForm {
  HeckeForm form;
  double ell = 1.0;
};

struct ProxyParams {
  double x = 1000;
  double y = 1000;
  double z = 2;
  std::vector<WeightedForm> weights;

  /// x >= 10, 2 <= y <= x, 2 <= z <= x, every ell > 0, every table reaches x.
  void validate() const;
  /// z = x^{1 / log log D}, clamped into [2, x].
  static double default_z(double x, i64 D);
};

struct MajorantTerms {
  double value = 0;
  i64 terms = 0;  // number of prime powers p^n <= x visited
};

/// sum_{p^n <= x} Λ(p^n) chi_d(p^n) / (n p^{n(1/2 + 1/log x)}) * log(x/p^n) / log x, where
/// Λ(p^n) = alpha^n + beta^n for p not dividing N and lambda(p)^n for p | N. No O-term added.
MajorantTerms chandee_terms(const HeckeForm& form, const Discriminant& d, double x);
double chandee_majorant(const HeckeForm& form, const Discriminant& d, double x);

/// log|d| / log x + 1: the scale multiplying the calibrated constant in the majorant bound.
double majorant_slack_scale(const Discriminant& d, double x);

struct MajorantParts {
  double prime_part = 0;  // n = 1, all p <= x
  double sym2_part = 0;   // n = 2, p <= sqrt(x), p not dividing N
  double remainder = 0;   // n >= 3, plus n = 2 at p | N; summed independently
  double total = 0;       // chandee_majorant
};
MajorantParts decompose_majorant(const HeckeForm& form, const Discriminant& d, double x);

/// P(d; x, y) = sum_{p <= y} (sum_i ell_i lambda_i(p)) chi_d(p) p^{-(1/2 + 1/log x)} (1 - log p / log x).
double p_poly(const Discriminant& d, const std::vector<WeightedForm>& weights, double x, double y);
double p_poly(const Discriminant& d, const ProxyParams& params);
/// Same summand restricted to lo < p <= hi.
double p_poly_range(const Discriminant& d, const std::vector<WeightedForm>& weights, double x, double lo, double hi);

/// sum_{y < p <= x} (sum_i ell_i lambda_i(p))^2 [p does not divide d] / p.
double coefficient_sum(const std::vector<WeightedForm>& weights, const Discriminant& d, double y, double x);

/// sum_{2 < p <= x} lambda_f(p) lambda_g(p) / p.
double rankin_selberg_sum(const HeckeForm& f, const HeckeForm& g, double x);

}  // namespace twistlab
