#include "calibration.hpp"

#include <cmath>

#include "twistlab/error.hpp"
#include "twistlab/kernels.hpp"

namespace twistlab::calib {

namespace {

i64 table_limit(FormRegistry& reg, const std::string& name, i64 max_abs_d, const AfeParams& afe) {
  if (name == "delta") return required_table_limit(12, 1, max_abs_d, afe);
  return required_table_limit(2, reg.curve(name).conductor, max_abs_d, afe);
}

}  // namespace

MajorantScan majorant_scan(FormRegistry& reg, const std::string& name, i64 D, int sigma) {
  const AfeParams afe;
  const HeckeForm form = reg.get(name, table_limit(reg, name, 2 * D, afe));
  const std::vector<HeckeForm> one{form};
  const auto rc = find_admissible_residue(one, sigma);
  if (!rc) throw ConfigError("majorant_scan: no admissible class for " + name);
  const auto slice = enumerate_family(D, sigma, rc->a, rc->N0);
  const auto vals = central_values(form, slice.members, afe);
  const auto excess = parallel_map(slice.size(), [&](std::size_t j) -> std::optional<double> {
    const auto logL = log_central_value(vals[j]);
    if (!logL) return std::nullopt;
    const auto& d = slice.members[j];
    const double x = static_cast<double>(d.absval);
    return (*logL - chandee_majorant(form, d, x)) / majorant_slack_scale(d, x);
  });
  MajorantScan out;
  out.members = static_cast<i64>(slice.size());
  for (const auto& e : excess)
    if (e) {
      ++out.positive;
      out.excess.push_back(*e);
      out.max_excess = std::max(out.max_excess, *e);
    }
  return out;
}

MomentRequest request(FormRegistry& reg, const std::vector<std::string>& names, i64 D, int sigma) {
  MomentRequest req;
  req.D = D;
  req.sigma = sigma;
  std::vector<HeckeForm> forms;
  for (const auto& n : names) {
    req.forms.push_back({reg.get(n, table_limit(reg, n, 2 * D, req.afe)), 1.0});
    forms.push_back(req.forms.back().form);
  }
  if (names.size() == 1 && names.front() == "delta") {
    req.a = 1;
    req.N0 = 8;
  } else {
    const auto rc = find_admissible_residue(forms, sigma);
    if (!rc) throw ConfigError("request: no admissible class");
    req.a = rc->a;
    req.N0 = rc->N0;
  }
  return req;
}

AppsStats apps_stats(FormRegistry& reg, i64 D) {
  const AfeParams afe;
  const auto e11 = reg.bsd("11a1", table_limit(reg, "11a1", 2 * D, afe));
  const auto e14 = reg.bsd("14a1", table_limit(reg, "14a1", 2 * D, afe));
  const std::vector<HeckeForm> forms{e11.form, e14.form};
  const auto rc = find_admissible_residue(forms, -1);
  if (!rc) throw ConfigError("apps_stats: no admissible class");
  AppsStats out;
  out.slice = enumerate_family(D, -1, rc->a, rc->N0);
  const auto g11 = make_half_integral_form("g_11a1", e11.form);
  const auto g14 = make_half_integral_form("g_14a1", e14.form);
  out.coeff = coeff_decorrelation_sum({g11, g14}, out.slice, afe);
  out.coeff_single = coeff_decorrelation_sum({g11}, out.slice, afe);
  out.iso = isotropy_statistic({e11, e14}, out.slice, afe);
  out.iso_single = isotropy_statistic({e11}, out.slice, afe);
  return out;
}

double lemma21_worst_ratio(FormRegistry& reg, const std::vector<i64>& D_grid, const std::vector<double>& x_grid) {
  const HeckeForm delta = reg.get("delta", 1000);
  const auto ap = [&](i64 p) { return delta.lambda_p(p); };
  double worst = 0;
  for (i64 D : D_grid)
    for (double x : x_grid) {
      const auto r = lemma21_check(D, 1, x, ap, 1, 1, 8, RangePolicy::Extended);
      if (r.rhs > 0) worst = std::max(worst, r.lhs / r.rhs);
    }
  return worst;
}

double tail_worst_ratio(FormRegistry& reg, i64 D, const std::vector<double>& V_grid) {
  ProxyParams params;
  params.x = params.y = static_cast<double>(D);
  params.z = ProxyParams::default_z(params.x, D);
  params.weights = {{reg.get("delta", D), 1.0}};
  const auto slice = enumerate_family(D, 1, 1, 8);
  const auto A = large_value_count(slice, params, V_grid, 0.1);
  double worst = 0;
  for (std::size_t k = 0; k < V_grid.size(); ++k) {
    const double bound = tail_bound_formula(V_grid[k], D, {1.0}, 0.1).value;
    if (bound > 0) worst = std::max(worst, static_cast<double>(A.counts[k]) / bound);
  }
  return worst;
}

}  // namespace twistlab::calib
