#pragma once

// Arithmetic read-outs of twisted central values: half-integral-weight Fourier coefficients
// through the Kohnen-Zagier formula |c(|d|)|^2 = kappa L(1/2, f x chi_d), and analytic orders
// of Tate-Shafarevich groups of quadratic twists under the BSD formula in rank 0.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "twistlab/elliptic.hpp"
#include "twistlab/lfunc.hpp"

namespace twistlab {

struct HalfIntegralForm {
  std::string label;
  HeckeForm shimura_lift;
  int k = 1;           // weight k + 1/2; the lift has weight 2k
  double kappa = 1.0;  // (k-1)!/π^k <g,g>/<f,f>, supplied by the user

  /// Coefficients live on (-1)^k d > 0.
  int sign() const { return k % 2 == 0 ? 1 : -1; }
};

/// kappa > 0 and lift weight 2k.
HalfIntegralForm make_half_integral_form(std::string label, HeckeForm lift, double kappa = 1.0);

struct FourierCoefficient {
  double value = 0;  // |c(|d|)| = sqrt(kappa max(0, L))
  LValue L;
  bool clamped = false;  // L was negative and clamped to 0
};

/// DomainError when (-1)^k d < 0 or gcd(d, 4N) > 1.
FourierCoefficient fourier_coeff(const HalfIntegralForm& g, const Discriminant& d, const AfeParams& afe = {});

struct CoefficientSum {
  std::size_t family_size = 0;
  double value = 0;                   // (1/D) sum_d prod_i |c_i(|d|)|
  std::vector<double> singles;        // (1/D) sum_d |c_i(|d|)| per form
  double ratio = 0;                   // family-average ratio: mean of product / prod of means (NaN when a single vanishes)
  std::size_t clamped = 0;
  std::vector<std::string> warnings;
};
/// ConfigError when the forms (or the slice sign) disagree on the sign condition.
CoefficientSum coeff_decorrelation_sum(const std::vector<HalfIntegralForm>& gforms, const FamilySlice& slice,
                                       const AfeParams& afe = {});

enum class LocalProvider { TableFile, ConstantOverride };

struct LocalTwistData {
  i64 tamagawa_product = 1;  // prod_p c_p(E^(d))
  int torsion = 1;           // #E^(d)(Q)_tors
  double u_tilde = 1.0;      // Omega(E^(d)) sqrt|d| = u_tilde Omega_sign(E)
};

struct TwistBsdData {
  EllipticCurveSpec curve;
  HeckeForm form;
  LocalProvider provider = LocalProvider::TableFile;
  std::map<i64, LocalTwistData> local;  // keyed by d

  const LocalTwistData& local_for(const Discriminant& d) const;
};

/// Lines "d tamagawa_product torsion u_tilde"; '#' comments. u_tilde must lie in (1/2)Z.
std::map<i64, LocalTwistData> read_local_file(const std::filesystem::path& path);
std::map<i64, LocalTwistData> parse_local_data(const std::string& text, const std::string& source_name);

struct ShaValue {
  double sha = 0;
  bool rank0 = false;
  LValue L;
  LocalTwistData local;
  double nearest_square = 0;   // closest n^2, n >= 1
  bool near_square = false;    // |sha - n^2| <= 1% of n^2 (diagnostic only)
};

/// rank0 = (eps = +1 and L > err_bound); then sha = L tors^2 sqrt|d| / (u_tilde Omega_sign prod c_p),
/// Omega_sign the real period for d > 0 and the imaginary one for d < 0.
ShaValue analytic_sha(const TwistBsdData& tw, const Discriminant& d, const AfeParams& afe = {});
/// The same formula on explicit inputs.
double sha_from_bsd(double L, const LocalTwistData& local, double omega_sign, i64 abs_d);

struct IsotropyStatistic {
  std::size_t family_size = 0;
  double value = 0;          // (1/D) sum_d prod_i delta_i sqrt(sha_i) / |d|^{1/4}
  std::size_t rank0_terms = 0;  // members where every curve has rank 0
  std::vector<std::string> warnings;
};
IsotropyStatistic isotropy_statistic(const std::vector<TwistBsdData>& curves, const FamilySlice& slice,
                                     const AfeParams& afe = {});

}  // namespace twistlab
