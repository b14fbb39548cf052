#include "twistlab/proxy.hpp"

#include <algorithm>
#include <cmath>

#include "twistlab/error.hpp"
#include "twistlab/special.hpp"

namespace twistlab {

namespace {

void require_coverage(const HeckeForm& f, double x, const char* op) {
  if (static_cast<double>(f.limit()) < std::floor(x))
    throw CapacityError(std::string(op) + ": eigenvalue table for " + f.label() + " ends at " +
                        std::to_string(f.limit()) + " < x = " + std::to_string(x));
}

void require_coprime(const HeckeForm& f, const Discriminant& d, const char* op) {
  if (gcd(d.absval, f.level()) != 1)
    throw DomainError(std::string(op) + ": gcd(d, N) > 1 for d=" + std::to_string(d.d) + ", " + f.label());
}

void require_weights(const std::vector<WeightedForm>& w, double x, const char* op) {
  if (w.empty()) throw ConfigError(std::string(op) + ": empty form list");
  for (const auto& wf : w) require_coverage(wf.form, x, op);
}

// Prime p at index i of the first table, combined coefficient sum_i ell_i lambda_i(p).
// Tables all start from the same prime list, so index i is the same prime everywhere.
double combined(const std::vector<WeightedForm>& w, std::size_t i) {
  double c = 0;
  for (const auto& wf : w) c += wf.ell * wf.form.table().prime_values()[i];
  return c;
}

}  // namespace

void ProxyParams::validate() const {
  if (!(x >= 10)) throw ConfigError("proxy: x >= 10 required");
  if (!(y >= 2 && y <= x)) throw ConfigError("proxy: 2 <= y <= x required");
  if (!(z >= 2 && z <= x)) throw ConfigError("proxy: 2 <= z <= x required");
  for (const auto& w : weights)
    if (!(w.ell > 0)) throw ConfigError("proxy: every ell must be positive");
  require_weights(weights, x, "proxy");
}

double ProxyParams::default_z(double x, i64 D) {
  const double ll = std::log(std::log(static_cast<double>(D)));
  if (!(ll > 0)) throw DomainError("default_z: log log D must be positive");
  return std::clamp(std::pow(x, 1.0 / ll), 2.0, x);
}

MajorantTerms chandee_terms(const HeckeForm& form, const Discriminant& d, double x) {
  if (!(x > 10)) throw DomainError("chandee_majorant: x > 10 required");
  require_coprime(form, d, "chandee_majorant");
  require_coverage(form, x, "chandee_majorant");
  const double log_x = std::log(x);
  const double shift = 0.5 + 1.0 / log_x;
  const auto& primes = form.table().primes();
  const auto values = form.table().prime_values();
  CompensatedSum sum;
  MajorantTerms out;
  for (std::size_t i = 0; i < primes.size() && static_cast<double>(primes[i]) <= x; ++i) {
    const i64 p = primes[i];
    const int chi = kronecker(d.d, p);
    const double lp = values[i];
    const bool bad = form.is_bad(p);
    double s_prev = 2.0, s = lp;  // power sums s_{n-1}, s_n
    double pn = 1.0;
    int chi_n = 1;
    for (int n = 1;; ++n) {
      pn *= static_cast<double>(p);
      if (pn > x) break;
      chi_n *= chi;
      if (n > 1) {
        const double next = bad ? lp * s : lp * s - s_prev;
        s_prev = s;
        s = next;
      }
      ++out.terms;
      if (chi_n == 0) continue;
      const double weight = std::log(x / pn) / log_x;
      sum.add(s * chi_n / (n * std::pow(pn, shift)) * weight);
    }
  }
  out.value = sum.value();
  return out;
}

double chandee_majorant(const HeckeForm& form, const Discriminant& d, double x) {
  return chandee_terms(form, d, x).value;
}

double majorant_slack_scale(const Discriminant& d, double x) {
  return std::log(static_cast<double>(d.absval)) / std::log(x) + 1.0;
}

MajorantParts decompose_majorant(const HeckeForm& form, const Discriminant& d, double x) {
  MajorantParts out;
  out.total = chandee_majorant(form, d, x);
  const double log_x = std::log(x);
  const double shift = 0.5 + 1.0 / log_x;
  const auto& primes = form.table().primes();
  const auto values = form.table().prime_values();
  CompensatedSum prime, sym2, rest;
  for (std::size_t i = 0; i < primes.size() && static_cast<double>(primes[i]) <= x; ++i) {
    const i64 p = primes[i];
    const auto pd = static_cast<double>(p);
    const int chi = kronecker(d.d, p);
    const double lp = values[i];
    const bool bad = form.is_bad(p);
    if (chi != 0) prime.add(lp * chi / std::pow(pd, shift) * (std::log(x / pd) / log_x));
    if (pd * pd > x || chi == 0) continue;
    // n = 2: (lambda_sym2 - 1) delta_{p∤d} / p^{1 + 2/log x} at good p
    const double w2 = std::log(x / (pd * pd)) / log_x;
    const double base2 = 2.0 * std::pow(pd * pd, shift);
    if (!bad)
      sym2.add((lp * lp - 2.0) / base2 * w2);
    else
      rest.add(lp * lp / base2 * w2);
    double s_prev = lp, s = bad ? lp * lp : lp * lp - 2.0;
    double pn = pd * pd;
    for (int n = 3;; ++n) {
      pn *= pd;
      if (pn > x) break;
      const double next = bad ? lp * s : lp * s - s_prev;
      s_prev = s;
      s = next;
      const int sign = (n % 2 == 1) ? chi : 1;
      rest.add(s * sign / (n * std::pow(pn, shift)) * (std::log(x / pn) / log_x));
    }
  }
  out.prime_part = prime.value();
  out.sym2_part = sym2.value();
  out.remainder = rest.value();
  return out;
}

double p_poly_range(const Discriminant& d, const std::vector<WeightedForm>& weights, double x, double lo, double hi) {
  require_weights(weights, hi, "p_poly");
  for (const auto& w : weights) require_coprime(w.form, d, "p_poly");
  const double log_x = std::log(x);
  const double shift = 0.5 + 1.0 / log_x;
  const auto& primes = weights.front().form.table().primes();
  CompensatedSum sum;
  for (std::size_t i = 0; i < primes.size() && static_cast<double>(primes[i]) <= hi; ++i) {
    const auto pd = static_cast<double>(primes[i]);
    if (pd <= lo) continue;
    const int chi = kronecker(d.d, primes[i]);
    if (chi == 0) continue;
    sum.add(combined(weights, i) * chi / std::pow(pd, shift) * (1.0 - std::log(pd) / log_x));
  }
  return sum.value();
}

double p_poly(const Discriminant& d, const std::vector<WeightedForm>& weights, double x, double y) {
  return p_poly_range(d, weights, x, 0.0, y);
}

double p_poly(const Discriminant& d, const ProxyParams& params) {
  params.validate();
  return p_poly(d, params.weights, params.x, params.y);
}

double coefficient_sum(const std::vector<WeightedForm>& weights, const Discriminant& d, double y, double x) {
  if (!(y >= 2 && y <= x)) throw DomainError("coefficient_sum: 2 <= y <= x required");
  require_weights(weights, x, "coefficient_sum");
  const auto& primes = weights.front().form.table().primes();
  CompensatedSum sum;
  for (std::size_t i = 0; i < primes.size() && static_cast<double>(primes[i]) <= x; ++i) {
    const i64 p = primes[i];
    if (static_cast<double>(p) <= y || d.absval % p == 0) continue;
    const double c = combined(weights, i);
    sum.add(c * c / static_cast<double>(p));
  }
  return sum.value();
}

double rankin_selberg_sum(const HeckeForm& f, const HeckeForm& g, double x) {
  if (!(x >= 3)) throw DomainError("rankin_selberg_sum: x >= 3 required");
  require_coverage(f, x, "rankin_selberg_sum");
  require_coverage(g, x, "rankin_selberg_sum");
  const auto& primes = f.table().primes();
  const auto vf = f.table().prime_values();
  const auto vg = g.table().prime_values();
  CompensatedSum sum;
  for (std::size_t i = 1; i < primes.size() && static_cast<double>(primes[i]) <= x; ++i)
    sum.add(vf[i] * vg[i] / static_cast<double>(primes[i]));
  return sum.value();
}

}  // namespace twistlab
