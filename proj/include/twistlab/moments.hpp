#pragma once

// Family statistics over a slice D <= sigma*d <= 2D, d ≡ a (mod N0): mixed moments of central
// values, log-value covariances, tail counts of the proxy and of log L, and the closed-form
// evaluators used to compare them.

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "twistlab/lfunc.hpp"
#include "twistlab/proxy.hpp"

namespace twistlab {

struct MomentRequest {
  std::vector<WeightedForm> forms;  // ell >= 0; ell = 0 is the validation mode
  i64 D = 1000;
  int sigma = 1;
  i64 a = 1;
  i64 N0 = 8;
  double epsilon_run = 0.1;
  AfeParams afe;
  bool parallel = true;

  /// ConfigError on bad family parameters, negative ell, or a residue class whose probed
  /// twists do not all have root number +1.
  void validate() const;
};

/// Central values for every (form, member) pair. Forms are put in canonical order
/// (label, then ell) and values are computed once per distinct eigenvalue table.
struct FamilyValues {
  FamilySlice slice;
  std::vector<WeightedForm> forms;
  std::vector<std::vector<LValue>> values;  // values[i][j]: form i at member j
};
FamilyValues family_values(const MomentRequest& req);

struct MomentReport {
  i64 D = 0;
  std::size_t family_size = 0;
  std::vector<std::string> labels;
  std::vector<double> ells;
  double mixed_moment = 0;             // divided by D
  double mixed_moment_per_member = 0;  // divided by family_size
  std::vector<double> per_form_moment;  // (1/D) sum L_i^{ell_i}
  std::vector<double> log_mean, log_var;
  std::vector<std::size_t> log_count;  // members entering form i's log statistics
  std::vector<std::vector<double>> log_cov, log_corr;
  std::vector<std::vector<std::size_t>> pair_count;
  std::size_t excluded_zero_count = 0;  // members with some value not above its error bound
  std::size_t negative_anomalies = 0;
  std::size_t tolerance_misses = 0;
  double decorrelation_ratio = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> fitted_exponent;
  std::vector<std::string> warnings;
};

MomentReport mixed_moment(const MomentRequest& req);
MomentReport summarize(const FamilyValues& fv);
/// Requires at least two forms; adds the ratio of the mixed family average to the product of per-form averages.
MomentReport decorrelation_diagnostics(const MomentRequest& req);
MomentReport decorrelation_diagnostics(const FamilyValues& fv);

enum class TailKind { AProxy, BLogL };
const char* to_string(TailKind k);

/// The two cases of the large-deviation argument for a given V: the moment order r, the
/// polynomial length x = D^{1/(eps V)}, the split point z = x^{1/log log D} and V1, V2.
struct TailRegime {
  double V = 0;
  bool in_range = false;  // sqrt(log log D) <= V <= C log D / log log D
  bool small_v = false;   // V <= (eps/10) sigma^2 log log D
  i64 r_first = 0;        // floor(V1^2 / (2 sigma^2)) or floor(eps V / 10)
  i64 r_second = 0;       // floor(eps V / 10)
  double x = 0, z = 0, V1 = 0, V2 = 0;
};
TailRegime tail_regime(double V, i64 D, const std::vector<double>& ells, double epsilon_run,
                       double littlewood_c = 2.0);

struct TailCount {
  TailKind kind = TailKind::AProxy;
  std::vector<double> V_grid;
  std::vector<std::size_t> counts;
  std::size_t family_size = 0;
  std::size_t excluded_zero_count = 0;
  std::size_t littlewood_exceed = 0;  // B only: log L above C log D / log log D
  std::vector<TailRegime> regimes;
};

/// A(V; x) = #{d : P(d; x, x) > V}, every threshold in a single scan.
TailCount large_value_count(const FamilySlice& slice, const ProxyParams& params, const std::vector<double>& V_grid,
                            double epsilon_run = 0.1);
/// B(V) = #{d : sum_i ell_i log L_i(d) > V}. -infinity is a valid threshold.
TailCount b_count(const FamilyValues& fv, const std::vector<double>& V_grid, double epsilon_run = 0.1,
                  double littlewood_c = 2.0);
TailCount b_count(const MomentRequest& req, const std::vector<double>& V_grid);

/// (sum ell^2) log log D; DomainError for D < 16.
double sigma_sq(const std::vector<double>& ells, i64 D);
/// (-1/2 + eps)(sum ell) log log D; DomainError for D < 16.
double eta(const std::vector<double>& ells, i64 D, double epsilon_run);

struct TailBound {
  double value = 0;
  bool in_range = false;
};
/// D (e^{-(1-2eps)V^2/(2 sigma^2)} (log log D)^3 + e^{-(eps/11) V log V}).
TailBound tail_bound_formula(double V, i64 D, const std::vector<double>& ells, double epsilon_run,
                             double littlewood_c = 2.0);

/// sqrt(2π) sigma e^{sigma^2/2} = ∫ e^{-t^2/(2 sigma^2) + t} dt.
double gaussian_integral_identity(double sigma);
/// Composite Simpson over [-40 sigma, 40 sigma] + sigma^2 (the integrand peaks at t = sigma^2).
double gaussian_integral_quadrature(double sigma, int panels = 200000);

enum class RangePolicy { Strict, Extended };

struct Lemma21Result {
  double lhs = 0;
  double rhs = 0;
  bool in_range = false;  // x <= D^{1/(10 r)}
  std::size_t family_size = 0;
};
/// lhs = sum_d (sum_{p<=x} a_p chi_d(p) / sqrt p)^{2r}, rhs = (2r)!/(r! 2^r) D (sum a_p^2 / p)^r.
/// Strict policy throws DomainError outside the range; Extended computes and marks it.
Lemma21Result lemma21_check(i64 D, int r, double x, const std::function<double(i64)>& coeffs, int sigma = 1,
                            i64 a = 1, i64 N0 = 8, RangePolicy policy = RangePolicy::Strict);

struct ExponentFit {
  std::vector<i64> D_grid;
  std::vector<double> normalized_moment;  // mixed moment per family member
  std::vector<double> residuals;
  double slope = 0;
  double intercept = 0;
  double predicted = 0;  // sum ell (ell - 1) / 2
};
/// Least-squares slope of log(moment per member) against log log D. Diagnostic only.
ExponentFit exponent_sweep(const MomentRequest& tmpl, const std::vector<i64>& D_grid);

}  // namespace twistlab
