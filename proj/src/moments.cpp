#include "twistlab/moments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "twistlab/error.hpp"
#include "twistlab/kernels.hpp"
#include "twistlab/special.hpp"

namespace twistlab {

namespace {

double loglog(i64 D, const char* op) {
  if (D < 16) throw DomainError(std::string(op) + ": D >= 16 required");
  return std::log(std::log(static_cast<double>(D)));
}

double clamp_zero(const LValue& v) { return v.value > 0 ? v.value : 0.0; }

std::vector<WeightedForm> canonical(std::vector<WeightedForm> forms) {
  std::stable_sort(forms.begin(), forms.end(), [](const WeightedForm& a, const WeightedForm& b) {
    if (a.form.label() != b.form.label()) return a.form.label() < b.form.label();
    return a.ell < b.ell;
  });
  return forms;
}

}  // namespace

void MomentRequest::validate() const {
  if (forms.empty()) throw ConfigError("moments: empty form list");
  for (const auto& w : forms)
    if (!(w.ell >= 0)) throw ConfigError("moments: ell must be >= 0 for " + w.form.label());
  if (!(epsilon_run > 0 && epsilon_run < 0.5)) throw ConfigError("moments: epsilon must lie in (0, 0.5)");
  afe.validate();
  validate_family_params(D, sigma, a, N0);
  std::vector<HeckeForm> hf;
  for (const auto& w : forms) {
    if (N0 % w.form.level() != 0)
      throw ConfigError("moments: N0 = " + std::to_string(N0) + " is not a multiple of the level of " + w.form.label());
    hf.push_back(w.form);
  }
  if (!residue_is_admissible(hf, sigma, a, N0))
    throw ConfigError("moments: inadmissible residue class a=" + std::to_string(a) + " mod " + std::to_string(N0) +
                      " (some twisted root number is -1)");
}

FamilyValues family_values(const MomentRequest& req) {
  req.validate();
  FamilyValues fv;
  fv.slice = enumerate_family(req.D, req.sigma, req.a, req.N0);
  if (fv.slice.members.empty()) throw ConfigError("moments: empty family slice");
  fv.forms = canonical(req.forms);
  std::map<const EigenvalueTable*, std::vector<LValue>> cache;
  for (const auto& w : fv.forms) {
    auto it = cache.find(&w.form.table());
    if (it == cache.end()) {
      auto vals = req.parallel ? central_values(w.form, fv.slice.members, req.afe)
                               : central_values_serial(w.form, fv.slice.members, req.afe);
      it = cache.emplace(&w.form.table(), std::move(vals)).first;
    }
    fv.values.push_back(it->second);
  }
  return fv;
}

MomentReport summarize(const FamilyValues& fv) {
  const std::size_t m = fv.forms.size();
  const std::size_t n = fv.slice.members.size();
  if (n == 0) throw ConfigError("moments: empty family slice");
  MomentReport rep;
  rep.D = fv.slice.D;
  rep.family_size = n;
  const auto D = static_cast<double>(fv.slice.D);
  for (const auto& w : fv.forms) {
    rep.labels.push_back(w.form.label());
    rep.ells.push_back(w.ell);
  }

  CompensatedSum mixed;
  std::vector<CompensatedSum> single(m);
  for (std::size_t j = 0; j < n; ++j) {
    double term = 1.0;
    bool excluded = false;
    for (std::size_t i = 0; i < m; ++i) {
      const LValue& v = fv.values[i][j];
      const double p = std::pow(clamp_zero(v), fv.forms[i].ell);
      term *= p;
      single[i].add(p);
      if (!v.positive()) excluded = true;
      if (v.has(kNegativeAnomaly)) ++rep.negative_anomalies;
      if (v.has(kToleranceMissed)) ++rep.tolerance_misses;
    }
    mixed.add(term);
    if (excluded) ++rep.excluded_zero_count;
  }
  rep.mixed_moment = mixed.value() / D;
  rep.mixed_moment_per_member = mixed.value() / static_cast<double>(n);
  for (auto& s : single) rep.per_form_moment.push_back(s.value() / D);

  // log statistics; population moments, zeros excluded (pairwise for covariances)
  std::vector<std::vector<double>> logs(m, std::vector<double>(n, 0.0));
  std::vector<std::vector<char>> ok(m, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (auto lv = log_central_value(fv.values[i][j])) {
        logs[i][j] = *lv;
        ok[i][j] = 1;
      }
  rep.log_cov.assign(m, std::vector<double>(m, std::numeric_limits<double>::quiet_NaN()));
  rep.log_corr = rep.log_cov;
  rep.pair_count.assign(m, std::vector<std::size_t>(m, 0));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      CompensatedSum sa, sb;
      std::size_t cnt = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (ok[a][j] && ok[b][j]) {
          sa.add(logs[a][j]);
          sb.add(logs[b][j]);
          ++cnt;
        }
      rep.pair_count[a][b] = rep.pair_count[b][a] = cnt;
      if (cnt == 0) continue;
      const double ma = sa.value() / static_cast<double>(cnt), mb = sb.value() / static_cast<double>(cnt);
      CompensatedSum caa, cbb, cab;
      for (std::size_t j = 0; j < n; ++j)
        if (ok[a][j] && ok[b][j]) {
          const double da = logs[a][j] - ma, db = logs[b][j] - mb;
          caa.add(da * da);
          cbb.add(db * db);
          cab.add(da * db);
        }
      const double c = static_cast<double>(cnt);
      const double cov = cab.value() / c;
      rep.log_cov[a][b] = rep.log_cov[b][a] = cov;
      const double denom = std::sqrt(caa.value() / c) * std::sqrt(cbb.value() / c);
      rep.log_corr[a][b] = rep.log_corr[b][a] = denom > 0 ? cov / denom : std::numeric_limits<double>::quiet_NaN();
      if (a == b) {
        rep.log_mean.push_back(ma);
        rep.log_var.push_back(cov);
        rep.log_count.push_back(cnt);
      }
    }
    if (rep.log_mean.size() == a) {  // no usable member for this form
      rep.log_mean.push_back(std::numeric_limits<double>::quiet_NaN());
      rep.log_var.push_back(std::numeric_limits<double>::quiet_NaN());
      rep.log_count.push_back(0);
    }
  }

  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      if (&fv.forms[a].form.table() == &fv.forms[b].form.table() ||
          fv.forms[a].form.label() == fv.forms[b].form.label())
        rep.warnings.push_back("duplicated form " + fv.forms[a].form.label() +
                               ": distinct forms are required for decorrelation statements");
  if (rep.negative_anomalies > 0)
    rep.warnings.push_back(std::to_string(rep.negative_anomalies) + " central values below -err_bound (clamped to 0 in moments)");
  if (rep.tolerance_misses > 0)
    rep.warnings.push_back(std::to_string(rep.tolerance_misses) + " central values missed the error tolerance");
  return rep;
}

MomentReport mixed_moment(const MomentRequest& req) { return summarize(family_values(req)); }

MomentReport decorrelation_diagnostics(const FamilyValues& fv) {
  if (fv.forms.size() < 2) throw ConfigError("decorrelation_diagnostics: at least two forms required");
  MomentReport rep = summarize(fv);
  // Ratio of family averages, so the D / |family| density factor cancels.
  const double scale = rep.family_size > 0 ? static_cast<double>(rep.D) / static_cast<double>(rep.family_size) : 0.0;
  double prod = 1.0;
  for (double s : rep.per_form_moment) prod *= s * scale;
  if (prod > 0) rep.decorrelation_ratio = rep.mixed_moment_per_member / prod;
  return rep;
}

MomentReport decorrelation_diagnostics(const MomentRequest& req) {
  if (req.forms.size() < 2) throw ConfigError("decorrelation_diagnostics: at least two forms required");
  return decorrelation_diagnostics(family_values(req));
}

const char* to_string(TailKind k) { return k == TailKind::AProxy ? "A_PROXY" : "B_LOGL"; }

double sigma_sq(const std::vector<double>& ells, i64 D) {
  const double ll = loglog(D, "sigma_sq");
  double s = 0;
  for (double l : ells) s += l * l;
  return s * ll;
}

double eta(const std::vector<double>& ells, i64 D, double epsilon_run) {
  const double ll = loglog(D, "eta");
  double s = 0;
  for (double l : ells) s += l;
  return (-0.5 + epsilon_run) * s * ll;
}

TailRegime tail_regime(double V, i64 D, const std::vector<double>& ells, double eps, double littlewood_c) {
  TailRegime t;
  t.V = V;
  const double ll = loglog(D, "tail_regime");
  const double s2 = sigma_sq(ells, D);
  const double logD = std::log(static_cast<double>(D));
  t.in_range = V >= std::sqrt(ll) && V <= littlewood_c * logD / ll;
  t.small_v = V <= eps / 10.0 * s2 * ll;
  t.V1 = (1.0 - eps) * V;
  t.V2 = eps * V;
  t.r_second = V > 0 ? static_cast<i64>(std::floor(eps * V / 10.0)) : 0;
  t.r_first = t.small_v ? static_cast<i64>(std::floor(t.V1 * t.V1 / (2.0 * s2))) : t.r_second;
  t.x = V > 0 ? std::exp(logD / (eps * V)) : std::numeric_limits<double>::infinity();
  t.z = std::exp(std::log(t.x) / ll);
  return t;
}

TailBound tail_bound_formula(double V, i64 D, const std::vector<double>& ells, double eps, double littlewood_c) {
  const double ll = loglog(D, "tail_bound_formula");
  const double s2 = sigma_sq(ells, D);
  const double gauss = std::exp(-(1.0 - 2.0 * eps) * V * V / (2.0 * s2)) * ll * ll * ll;
  const double vlogv = V > 0 ? V * std::log(V) : 0.0;
  const double tail = std::exp(-(eps / 11.0) * vlogv);
  TailBound b;
  b.value = static_cast<double>(D) * (gauss + tail);
  b.in_range = tail_regime(V, D, ells, eps, littlewood_c).in_range;
  return b;
}

namespace {

TailCount count_above(TailKind kind, const std::vector<std::optional<double>>& values, const std::vector<double>& V_grid) {
  TailCount tc;
  tc.kind = kind;
  tc.V_grid = V_grid;
  tc.counts.assign(V_grid.size(), 0);
  tc.family_size = values.size();
  for (const auto& v : values) {
    if (!v) {
      ++tc.excluded_zero_count;
      continue;
    }
    for (std::size_t k = 0; k < V_grid.size(); ++k)
      if (*v > V_grid[k]) ++tc.counts[k];
  }
  return tc;
}

std::vector<double> ells_of(const std::vector<WeightedForm>& w) {
  std::vector<double> out;
  for (const auto& f : w) out.push_back(f.ell);
  return out;
}

}  // namespace

TailCount large_value_count(const FamilySlice& slice, const ProxyParams& params, const std::vector<double>& V_grid,
                            double epsilon_run) {
  params.validate();
  const auto& ds = slice.members;
  auto vals = parallel_map(ds.size(), [&](std::size_t j) -> std::optional<double> {
    return p_poly(ds[j], params.weights, params.x, params.x);
  });
  TailCount tc = count_above(TailKind::AProxy, vals, V_grid);
  if (slice.D >= 16)
    for (double V : V_grid) tc.regimes.push_back(tail_regime(V, slice.D, ells_of(params.weights), epsilon_run));
  return tc;
}

TailCount b_count(const FamilyValues& fv, const std::vector<double>& V_grid, double epsilon_run, double littlewood_c) {
  const std::size_t n = fv.slice.members.size();
  std::vector<std::optional<double>> logs(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0;
    bool ok = true;
    for (std::size_t i = 0; i < fv.forms.size() && ok; ++i) {
      if (fv.forms[i].ell == 0) continue;
      const auto lv = log_central_value(fv.values[i][j]);
      if (!lv) ok = false;
      else s += fv.forms[i].ell * *lv;
    }
    if (ok) logs[j] = s;
  }
  TailCount tc = count_above(TailKind::BLogL, logs, V_grid);
  if (fv.slice.D >= 16) {
    const double logD = std::log(static_cast<double>(fv.slice.D));
    const double cap = littlewood_c * logD / std::log(logD);
    for (const auto& v : logs)
      if (v && *v > cap) ++tc.littlewood_exceed;
    for (double V : V_grid) tc.regimes.push_back(tail_regime(V, fv.slice.D, ells_of(fv.forms), epsilon_run, littlewood_c));
  }
  return tc;
}

TailCount b_count(const MomentRequest& req, const std::vector<double>& V_grid) {
  return b_count(family_values(req), V_grid, req.epsilon_run);
}

double gaussian_integral_identity(double sigma) {
  if (!(sigma > 0)) throw DomainError("gaussian_integral_identity: sigma > 0 required");
  return std::sqrt(2.0 * std::numbers::pi) * sigma * std::exp(sigma * sigma / 2.0);
}

double gaussian_integral_quadrature(double sigma, int panels) {
  if (!(sigma > 0)) throw DomainError("gaussian_integral_quadrature: sigma > 0 required");
  if (panels < 2 || panels % 2) throw DomainError("gaussian_integral_quadrature: even panel count required");
  const double center = sigma * sigma;
  const double lo = center - 40.0 * sigma, hi = center + 40.0 * sigma;
  const double h = (hi - lo) / panels;
  auto f = [&](double t) { return std::exp(-t * t / (2.0 * sigma * sigma) + t); };
  CompensatedSum sum;
  sum.add(f(lo));
  sum.add(f(hi));
  for (int i = 1; i < panels; ++i) sum.add((i % 2 ? 4.0 : 2.0) * f(lo + i * h));
  return sum.value() * h / 3.0;
}

Lemma21Result lemma21_check(i64 D, int r, double x, const std::function<double(i64)>& coeffs, int sigma, i64 a,
                            i64 N0, RangePolicy policy) {
  if (r < 1) throw DomainError("lemma21_check: r >= 1 required");
  Lemma21Result res;
  res.in_range = x <= std::pow(static_cast<double>(D), 1.0 / (10.0 * r));
  if (!res.in_range && policy == RangePolicy::Strict)
    throw DomainError("lemma21_check: x = " + std::to_string(x) + " exceeds D^{1/(10r)} = " +
                      std::to_string(std::pow(static_cast<double>(D), 1.0 / (10.0 * r))));
  const auto slice = enumerate_family(D, sigma, a, N0);
  res.family_size = slice.size();
  std::vector<i64> primes;
  std::vector<double> ap;
  if (x >= 2)
    for (i64 p : sieve_primes(static_cast<i64>(std::floor(x))).primes) {
      primes.push_back(p);
      ap.push_back(coeffs(p));
    }
  CompensatedSum lhs;
  for (const auto& d : slice.members) {
    CompensatedSum inner;
    for (std::size_t i = 0; i < primes.size(); ++i)
      inner.add(ap[i] * kronecker(d.d, primes[i]) / std::sqrt(static_cast<double>(primes[i])));
    lhs.add(std::pow(inner.value(), 2 * r));
  }
  CompensatedSum diag;
  for (std::size_t i = 0; i < primes.size(); ++i) diag.add(ap[i] * ap[i] / static_cast<double>(primes[i]));
  // (2r)! / (r! 2^r) = (2r - 1)!!
  double dfact = 1.0;
  for (int k = 1; k < 2 * r; k += 2) dfact *= k;
  res.lhs = lhs.value();
  res.rhs = dfact * static_cast<double>(D) * std::pow(diag.value(), r);
  return res;
}

ExponentFit exponent_sweep(const MomentRequest& tmpl, const std::vector<i64>& D_grid) {
  if (D_grid.size() < 3) throw ConfigError("exponent_sweep: at least three D values required");
  for (std::size_t i = 1; i < D_grid.size(); ++i)
    if (D_grid[i] <= D_grid[i - 1]) throw ConfigError("exponent_sweep: D grid must be increasing");
  if (D_grid.front() < 16) throw ConfigError("exponent_sweep: D >= 16 required");
  ExponentFit fit;
  fit.D_grid = D_grid;
  for (const auto& w : tmpl.forms) fit.predicted += w.ell * (w.ell - 1.0) / 2.0;
  std::vector<double> xs, ys;
  for (i64 D : D_grid) {
    MomentRequest req = tmpl;
    req.D = D;
    const auto rep = mixed_moment(req);
    if (!(rep.mixed_moment_per_member > 0))
      throw ConfigError("exponent_sweep: vanishing moment at D=" + std::to_string(D));
    fit.normalized_moment.push_back(rep.mixed_moment_per_member);
    xs.push_back(std::log(std::log(static_cast<double>(D))));
    ys.push_back(std::log(rep.mixed_moment_per_member));
  }
  const auto n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < xs.size(); ++i) fit.residuals.push_back(ys[i] - (fit.intercept + fit.slope * xs[i]));
  return fit;
}

}  // namespace twistlab
