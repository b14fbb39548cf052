#pragma once

#include <cmath>

namespace twistlab {

/// Neumaier-compensated accumulator. Order-dependent by construction: callers fix the order.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Regularized upper incomplete gamma Q(a, z) = Γ(a, z) / Γ(a), a > 0, z >= 0.

/// Power series for P(a, z); returns 1 - P. Accurate for z < a + 1.
double gamma_q_series(double a, double z);
/// Modified Lentz continued fraction. Accurate for z > a + 1 (unreliable well below it).
double gamma_q_continued_fraction(double a, double z);
/// Dispatches between the two above.
double gamma_q(double a, double z);
/// Exact finite form for integer a >= 1: e^{-z} Σ_{j<a} z^j / j!.
double gamma_q_integer(int a, double z);

}  // namespace twistlab
