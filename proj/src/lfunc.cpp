#include "twistlab/lfunc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "twistlab/error.hpp"
#include "twistlab/special.hpp"

namespace twistlab {

namespace {

// Terms are processed in blocks of kExpBlock: one exact exponential per block, a table of
// e^{-hj} inside it, and a plain partial sum that is then added with compensation.
constexpr std::size_t kExpBlock = 64;

}  // namespace

void AfeParams::validate() const {
  if (!(trunc_multiplier >= 1.0)) throw ConfigError("afe: trunc_multiplier must be >= 1");
  if (!(rel_tolerance > 0.0 && rel_tolerance < 1e-3)) throw ConfigError("afe: rel_tolerance must lie in (0, 1e-3)");
}

i64 conductor(const HeckeForm& form, const Discriminant& d) {
  if (gcd(d.absval, form.level()) != 1)
    throw DomainError("conductor: gcd(d, N) > 1 for d=" + std::to_string(d.d) + ", " + form.label());
  return form.level() * d.absval * d.absval;
}

double afe_kernel(double y, int k) {
  if (!(y > 0)) throw DomainError("afe_kernel: y must be positive");
  if (k < 2 || k % 2 != 0) throw DomainError("afe_kernel: weight must be even and >= 2");
  return gamma_q_integer(k / 2, 2.0 * std::numbers::pi * y);
}

double truncation_error_bound(int weight, double cond, i64 M) {
  const int s = weight / 2;
  const double root = std::sqrt(cond);
  const double z = 2.0 * std::numbers::pi * static_cast<double>(M) / root;
  return 4.0 * root * s / std::numbers::pi * gamma_q_integer(s + 1, z);
}

i64 truncation_length(int weight, double cond, const AfeParams& params) {
  params.validate();
  const double root = std::sqrt(cond);
  const int s = weight / 2;
  const double scale = 4.0 * root * s / std::numbers::pi;
  // Q(s+1, z) is decreasing in z: bisect for the smallest z meeting the target.
  double lo = 0.0, hi = 1.0;
  while (scale * gamma_q_integer(s + 1, hi) > params.rel_tolerance) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-9 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (scale * gamma_q_integer(s + 1, mid) > params.rel_tolerance ? lo : hi) = mid;
  }
  auto M = static_cast<i64>(std::ceil(hi * root / (2.0 * std::numbers::pi)));
  while (truncation_error_bound(weight, cond, M) > params.rel_tolerance) ++M;
  const auto floor_len = static_cast<i64>(std::ceil(params.trunc_multiplier * root));
  return std::max({M, floor_len, i64{1}});
}

i64 required_table_limit(int weight, i64 level, i64 max_abs_d, const AfeParams& params) {
  const double cond = static_cast<double>(level) * static_cast<double>(max_abs_d) * static_cast<double>(max_abs_d);
  return std::max<i64>(2, truncation_length(weight, cond, params));
}

LValue central_value(const HeckeForm& form, const Discriminant& d, const AfeParams& params) {
  params.validate();
  LValue out;
  out.d = d;
  out.form_label = form.label();
  out.eps_twist = root_number_twist(form, d);
  const double cond = static_cast<double>(conductor(form, d));
  if (out.eps_twist == -1) {
    out.flags |= kNumericallyVanishing;
    return out;
  }

  const i64 M = truncation_length(form.weight(), cond, params);
  if (M > form.limit())
    throw CapacityError("central_value: truncation length " + std::to_string(M) + " exceeds eigenvalue table limit " +
                        std::to_string(form.limit()) + " for " + form.label() + ", d=" + std::to_string(d.d));

  const auto chi = character_table(d);
  const auto coeff = form.table().scaled_coefficients();
  const int s = form.weight() / 2;
  std::vector<double> inv_fact(static_cast<std::size_t>(s));
  inv_fact[0] = 1.0;
  for (int j = 1; j < s; ++j) inv_fact[static_cast<std::size_t>(j)] = inv_fact[static_cast<std::size_t>(j - 1)] / j;

  const double h = 2.0 * std::numbers::pi / std::sqrt(cond);
  // e^{-h n} = e^{-h n0} * e^{-h j} with n0 recomputed exactly at each block start.
  std::array<double, kExpBlock> step_pow;
  for (std::size_t j = 0; j < kExpBlock; ++j) step_pow[j] = std::exp(-h * static_cast<double>(j));
  const auto period = static_cast<std::size_t>(d.absval);
  // Plain sums inside fixed 64-term blocks, compensated across blocks: fixed order, so deterministic.
  CompensatedSum sum;
  std::size_t r = 0;
  for (i64 n0 = 1; n0 <= M; n0 += static_cast<i64>(kExpBlock)) {
    const double base = std::exp(-h * static_cast<double>(n0));
    const i64 n1 = std::min<i64>(M, n0 + static_cast<i64>(kExpBlock) - 1);
    double block = 0.0;
    for (i64 n = n0; n <= n1; ++n) {
      if (++r == period) r = 0;
      const double z = h * static_cast<double>(n);
      double poly = inv_fact[static_cast<std::size_t>(s - 1)];
      for (int j = s - 2; j >= 0; --j) poly = poly * z + inv_fact[static_cast<std::size_t>(j)];
      block += static_cast<double>(chi[r]) * coeff[static_cast<std::size_t>(n)] * base *
               step_pow[static_cast<std::size_t>(n - n0)] * poly;
    }
    sum.add(block);
  }
  out.value = 2.0 * sum.value();
  out.err_bound = truncation_error_bound(form.weight(), cond, M);
  out.terms = M;
  if (std::fabs(out.value) <= out.err_bound) out.flags |= kNumericallyVanishing;
  if (out.value < -out.err_bound) out.flags |= kNegativeAnomaly;
  if (out.err_bound > params.rel_tolerance * std::max(1.0, std::fabs(out.value))) out.flags |= kToleranceMissed;
  return out;
}

std::optional<double> log_central_value(const LValue& v) {
  if (!v.positive()) return std::nullopt;
  return std::log(v.value);
}

std::optional<double> log_central_value(const HeckeForm& form, const Discriminant& d, const AfeParams& params) {
  return log_central_value(central_value(form, d, params));
}

std::string flags_string(unsigned flags) {
  std::string out;
  auto add = [&](const char* name) {
    if (!out.empty()) out += '|';
    out += name;
  };
  if (flags & kNumericallyVanishing) add("vanishing");
  if (flags & kToleranceMissed) add("tolerance_missed");
  if (flags & kNegativeAnomaly) add("negative");
  return out.empty() ? "-" : out;
}

}  // namespace twistlab
