#include "twistlab/apps.hpp"

#include <cmath>
#include <sstream>

#include "twistlab/error.hpp"
#include "twistlab/io.hpp"
#include "twistlab/kernels.hpp"
#include "twistlab/special.hpp"

namespace twistlab {

HalfIntegralForm make_half_integral_form(std::string label, HeckeForm lift, double kappa) {
  if (!(kappa > 0)) throw ConfigError("half-integral form " + label + ": kappa must be positive");
  const int k = lift.weight() / 2;
  return HalfIntegralForm{std::move(label), std::move(lift), k, kappa};
}

FourierCoefficient fourier_coeff(const HalfIntegralForm& g, const Discriminant& d, const AfeParams& afe) {
  if (g.sign() * d.d <= 0)
    throw DomainError("fourier_coeff: " + g.label + " lives in the plus space, where c(n) = 0 unless (-1)^k n ≡ 0,1 "
                      "(mod 4); here (-1)^k d = " + std::to_string(g.sign() * d.d) + " has the wrong sign");
  if (gcd(d.absval, 4 * g.shimura_lift.level()) != 1)
    throw DomainError("fourier_coeff: gcd(d, 4N) > 1 for d=" + std::to_string(d.d));
  FourierCoefficient c;
  c.L = central_value(g.shimura_lift, d, afe);
  c.clamped = c.L.value < 0;
  c.value = std::sqrt(g.kappa * std::max(0.0, c.L.value));
  return c;
}

CoefficientSum coeff_decorrelation_sum(const std::vector<HalfIntegralForm>& gforms, const FamilySlice& slice,
                                       const AfeParams& afe) {
  if (gforms.empty()) throw ConfigError("coeff_decorrelation_sum: at least one form required");
  for (const auto& g : gforms)
    if (g.sign() != slice.sigma)
      throw ConfigError("coeff_decorrelation_sum: mixed sign conditions; " + g.label + " needs sign(d) = " +
                        std::to_string(g.sign()) + " but the slice has sigma = " + std::to_string(slice.sigma));
  CoefficientSum out;
  out.family_size = slice.size();
  for (std::size_t i = 0; i < gforms.size(); ++i)
    for (std::size_t j = i + 1; j < gforms.size(); ++j)
      if (gforms[i].shimura_lift.label() == gforms[j].shimura_lift.label())
        out.warnings.push_back("duplicated Shimura lift " + gforms[i].shimura_lift.label());

  std::vector<std::vector<FourierCoefficient>> coeffs;
  for (const auto& g : gforms)
    coeffs.push_back(parallel_map(slice.size(), [&](std::size_t j) { return fourier_coeff(g, slice.members[j], afe); }));

  const auto D = static_cast<double>(slice.D);
  CompensatedSum prod_sum;
  std::vector<CompensatedSum> singles(gforms.size());
  for (std::size_t j = 0; j < slice.size(); ++j) {
    double prod = 1.0;
    for (std::size_t i = 0; i < gforms.size(); ++i) {
      const auto& c = coeffs[i][j];
      prod *= c.value;
      singles[i].add(c.value);
      if (c.clamped) ++out.clamped;
    }
    prod_sum.add(prod);
  }
  out.value = prod_sum.value() / D;
  double denom = 1.0;
  for (auto& s : singles) {
    out.singles.push_back(s.value() / D);
    denom *= out.singles.back();
  }
  // Ratio of family averages, so the D / |family| density factor cancels.
  const double scale = D / static_cast<double>(slice.size());
  denom *= std::pow(scale, static_cast<double>(gforms.size()) - 1.0);
  out.ratio = denom > 0 ? out.value / denom : std::numeric_limits<double>::quiet_NaN();
  return out;
}

const LocalTwistData& TwistBsdData::local_for(const Discriminant& d) const {
  static const LocalTwistData unit{};
  if (provider == LocalProvider::ConstantOverride) return unit;
  const auto it = local.find(d.d);
  if (it == local.end()) {
    std::string primes;
    i64 m = d.absval;
    for (i64 p = 2; p * p <= m; ++p)
      if (m % p == 0) {
        primes += (primes.empty() ? "" : ",") + std::to_string(p);
        while (m % p == 0) m /= p;
      }
    if (m > 1) primes += (primes.empty() ? "" : ",") + std::to_string(m);
    throw DataGapError("no local data for twist of " + curve.label + " by d=" + std::to_string(d.d) +
                       " (Tamagawa numbers needed at p | 2 N d, p in {" + primes + "} and the conductor primes)");
  }
  return it->second;
}

std::map<i64, LocalTwistData> parse_local_data(const std::string& text, const std::string& source_name) {
  std::map<i64, LocalTwistData> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    i64 d = 0;
    LocalTwistData v;
    if (!(ls >> d >> v.tamagawa_product >> v.torsion >> v.u_tilde))
      throw IoError(source_name + ":" + std::to_string(lineno) + ": expected 'd tamagawa_product torsion u_tilde'");
    if (v.tamagawa_product < 1 || v.torsion < 1)
      throw IoError(source_name + ":" + std::to_string(lineno) + ": Tamagawa product and torsion must be positive");
    if (!(v.u_tilde > 0) || std::fabs(2.0 * v.u_tilde - std::round(2.0 * v.u_tilde)) > 1e-12)
      throw IoError(source_name + ":" + std::to_string(lineno) + ": u_tilde must be a positive half-integer");
    out[d] = v;
  }
  return out;
}

std::map<i64, LocalTwistData> read_local_file(const std::filesystem::path& path) {
  return parse_local_data(read_file(path), path.string());
}

double sha_from_bsd(double L, const LocalTwistData& local, double omega_sign, i64 abs_d) {
  const double tors = local.torsion;
  return L * tors * tors * std::sqrt(static_cast<double>(abs_d)) /
         (local.u_tilde * omega_sign * static_cast<double>(local.tamagawa_product));
}

ShaValue analytic_sha(const TwistBsdData& tw, const Discriminant& d, const AfeParams& afe) {
  if (gcd(d.absval, 2 * tw.curve.conductor) != 1)
    throw DomainError("analytic_sha: gcd(d, 2N) > 1 for d=" + std::to_string(d.d));
  ShaValue out;
  out.L = central_value(tw.form, d, afe);
  out.rank0 = out.L.eps_twist == 1 && out.L.positive();
  if (!out.rank0) return out;
  out.local = tw.local_for(d);
  const double omega = d.d > 0 ? tw.curve.real_period : tw.curve.imag_period;
  if (!(omega > 0)) throw DataGapError("analytic_sha: " + tw.curve.label + " lacks the period for sign(d) = " +
                                       std::to_string(d.sigma));
  out.sha = sha_from_bsd(out.L.value, out.local, omega, d.absval);
  const double n = std::max(1.0, std::round(std::sqrt(out.sha)));
  out.nearest_square = n * n;
  out.near_square = std::fabs(out.sha - out.nearest_square) <= 0.01 * out.nearest_square;
  return out;
}

IsotropyStatistic isotropy_statistic(const std::vector<TwistBsdData>& curves, const FamilySlice& slice,
                                     const AfeParams& afe) {
  if (curves.empty()) throw ConfigError("isotropy_statistic: at least one curve required");
  IsotropyStatistic out;
  out.family_size = slice.size();
  for (std::size_t i = 0; i < curves.size(); ++i)
    for (std::size_t j = i + 1; j < curves.size(); ++j)
      if (curves[i].curve.label == curves[j].curve.label)
        out.warnings.push_back("duplicated curve " + curves[i].curve.label + " (distinct curves are assumed)");
  std::vector<std::vector<ShaValue>> shas;
  for (const auto& c : curves)
    shas.push_back(parallel_map(slice.size(), [&](std::size_t j) { return analytic_sha(c, slice.members[j], afe); }));
  CompensatedSum sum;
  for (std::size_t j = 0; j < slice.size(); ++j) {
    const double scale = std::pow(static_cast<double>(slice.members[j].absval), 0.25);
    double term = 1.0;
    bool all_rank0 = true;
    for (std::size_t i = 0; i < curves.size(); ++i) {
      const auto& s = shas[i][j];
      if (!s.rank0) {
        all_rank0 = false;
        term = 0.0;
        break;
      }
      term *= std::sqrt(s.sha) / scale;
    }
    if (all_rank0) ++out.rank0_terms;
    sum.add(term);
  }
  out.value = sum.value() / static_cast<double>(slice.D);
  return out;
}

}  // namespace twistlab
