#include "twistlab/special.hpp"

#include <limits>

#include "twistlab/error.hpp"

namespace twistlab {

namespace {
constexpr int kMaxIter = 100000;
constexpr double kEps = std::numeric_limits<double>::epsilon();
}  // namespace

double gamma_q_series(double a, double z) {
  if (!(a > 0) || z < 0) throw DomainError("gamma_q_series: need a > 0, z >= 0");
  if (z == 0) return 1.0;
  // P(a,z) = z^a e^{-z} / Γ(a+1) * Σ z^n / ((a+1)...(a+n))
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < kMaxIter; ++n) {
    term *= z / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) break;
  }
  const double log_prefactor = a * std::log(z) - z - std::lgamma(a + 1.0);
  return 1.0 - sum * std::exp(log_prefactor);
}

double gamma_q_continued_fraction(double a, double z) {
  if (!(a > 0) || !(z > 0)) throw DomainError("gamma_q_continued_fraction: need a > 0, z > 0");
  constexpr double tiny = std::numeric_limits<double>::min() / kEps;
  double b = z + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return std::exp(a * std::log(z) - z - std::lgamma(a)) * h;
}

double gamma_q(double a, double z) {
  if (z < a + 1.0) return gamma_q_series(a, z);
  return gamma_q_continued_fraction(a, z);
}

double gamma_q_integer(int a, double z) {
  if (a < 1 || z < 0) throw DomainError("gamma_q_integer: need integer a >= 1, z >= 0");
  double term = 1.0;
  double sum = 1.0;
  for (int j = 1; j < a; ++j) {
    term *= z / j;
    sum += term;
  }
  return std::exp(-z) * sum;
}

}  // namespace twistlab
