#pragma once

// Holomorphic newforms and their normalized Hecke eigenvalues.
//
// Every eigenvalue is stored in the analytic normalization
//   lambda(n) = a(n) / n^{(k-1)/2},
// so the critical point is s = 1/2 and |lambda(p)| <= 2 for p not dividing the level.
// At p | N the local factor is (1 - lambda(p) p^{-s})^{-1}, so lambda(p^j) = lambda(p)^j.

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twistlab/arith.hpp"

namespace twistlab {

enum class EigenSource { TauRecurrence, EllipticPointCount, TableFile };

const char* to_string(EigenSource s);

struct FormInfo {
  std::string label;
  int weight = 12;
  i64 level = 1;
  int root_number = 1;
  EigenSource source = EigenSource::TauRecurrence;
};

/// Dense multiplicative table of lambda(n), n <= limit, built from prime values.
class EigenvalueTable {
 public:
  /// `prime_values[i]` is lambda at the i-th prime <= limit. Asserts the Deligne bound.
  EigenvalueTable(FormInfo info, i64 limit, std::span<const double> prime_values);

  const FormInfo& info() const { return info_; }
  i64 limit() const { return limit_; }
  const std::vector<i64>& primes() const { return primes_; }
  /// lambda at the i-th prime, same order as primes().
  std::span<const double> prime_values() const { return prime_values_; }

  /// Throws CapacityError beyond the limit, DomainError for non-primes.
  double at_prime(i64 p) const;
  /// Dense lambda(n); throws CapacityError for n > limit.
  double coefficient(i64 n) const;
  /// lambda(n) n^{-1/2} for 0 <= n <= limit (index 0 holds 0).
  std::span<const double> scaled_coefficients() const { return scaled_; }
  std::span<const double> coefficients() const { return dense_; }

 private:
  FormInfo info_;
  i64 limit_;
  std::vector<i64> primes_;
  std::vector<double> prime_values_;
  std::vector<double> dense_;
  std::vector<double> scaled_;
};

class HeckeForm {
 public:
  explicit HeckeForm(std::shared_ptr<const EigenvalueTable> table);

  const FormInfo& info() const { return table_->info(); }
  const std::string& label() const { return info().label; }
  int weight() const { return info().weight; }
  i64 level() const { return info().level; }
  int root_number() const { return info().root_number; }
  i64 limit() const { return table_->limit(); }
  const EigenvalueTable& table() const { return *table_; }
  std::shared_ptr<const EigenvalueTable> table_ptr() const { return table_; }

  bool is_bad(i64 p) const { return level() % p == 0; }

  double lambda_p(i64 p) const { return table_->at_prime(p); }
  /// Multiplicative extension; n above the table limit is factored by trial division.
  double lambda_n(i64 n) const;
  /// alpha(p)^n + beta(p)^n for p not dividing the level (alpha*beta = 1).
  double big_lambda(i64 p, int n) const;
  /// lambda_{sym^2 f}(p) = lambda(p)^2 - 1 for p not dividing the level.
  double sym2_lambda(i64 p) const;
  /// Coefficient of p^{-ns}/n in log L_p(s): the power sum above for good p, lambda(p)^n at p | N.
  double local_power_sum(i64 p, int n) const;

 private:
  std::shared_ptr<const EigenvalueTable> table_;
};

/// Root number of f x chi_d: eps_f * chi_d(-N). Requires gcd(d, N) = 1.
int root_number_twist(const HeckeForm& form, const Discriminant& d);

struct ResidueClass {
  i64 a = 1;
  i64 N0 = 8;
};

/// N0 = lcm(8, N_1, ..., N_m) and the smallest a ≡ 1 (mod 4), gcd(a, N0) = 1, for which every
/// probed twist sigma*d > 0, d ≡ a (mod N0) has root number +1 for all forms.
std::optional<ResidueClass> find_admissible_residue(std::span<const HeckeForm> forms, int sigma);

/// True when every probed member of the class has all twisted root numbers +1.
bool residue_is_admissible(std::span<const HeckeForm> forms, int sigma, i64 a, i64 N0);

// Eigenvalue table files: "#form <label> weight <k> level <N> eps <±1> [limit <n>]" then "p lambda"
// lines listing every prime <= limit (limit defaults to the last prime).
void write_table_file(const std::filesystem::path& path, const EigenvalueTable& table);
HeckeForm read_table_file(const std::filesystem::path& path);

}  // namespace twistlab
