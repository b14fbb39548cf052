#include "twistlab/hecke.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "twistlab/error.hpp"
#include "twistlab/io.hpp"

namespace twistlab {

namespace {
constexpr double kDeligneSlack = 1e-9;
constexpr int kResidueProbeSize = 16;
}  // namespace

const char* to_string(EigenSource s) {
  switch (s) {
    case EigenSource::TauRecurrence: return "TAU_RECURRENCE";
    case EigenSource::EllipticPointCount: return "ELLIPTIC_POINT_COUNT";
    case EigenSource::TableFile: return "TABLE_FILE";
  }
  return "?";
}

EigenvalueTable::EigenvalueTable(FormInfo info, i64 limit, std::span<const double> prime_values)
    : info_(std::move(info)), limit_(limit) {
  if (info_.weight < 2 || info_.weight % 2 != 0) throw DomainError("form weight must be even and >= 2");
  if (info_.level < 1) throw DomainError("form level must be >= 1");
  if (info_.root_number != 1 && info_.root_number != -1) throw DomainError("root number must be +1 or -1");
  if (limit < 2) throw CapacityError("eigenvalue table limit must be >= 2");
  primes_ = sieve_primes(limit).primes;
  if (prime_values.size() != primes_.size())
    throw CapacityError("eigenvalue table for " + info_.label + " does not cover every prime <= " +
                        std::to_string(limit));
  prime_values_.assign(prime_values.begin(), prime_values.end());

  const auto size = static_cast<std::size_t>(limit) + 1;
  dense_.assign(size, 0.0);
  dense_[1] = 1.0;
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    const i64 p = primes_[i];
    const double lp = prime_values_[i];
    const bool bad = info_.level % p == 0;
    const double bound = bad ? 1.0 : 2.0;
    if (!(std::fabs(lp) <= bound + kDeligneSlack))
      throw DomainError("Deligne bound violated for " + info_.label + " at p=" + std::to_string(p));
    dense_[static_cast<std::size_t>(p)] = lp;
  }

  const FactorTable factors(limit);
  for (i64 n = 4; n <= limit; ++n) {
    const i64 p = factors.spf(n);
    if (p == n) continue;
    i64 m = n;
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    const auto un = static_cast<std::size_t>(n);
    if (m != 1) {
      dense_[un] = dense_[static_cast<std::size_t>(n / m)] * dense_[static_cast<std::size_t>(m)];
      continue;
    }
    // prime power p^e, e >= 2
    const double lp = dense_[static_cast<std::size_t>(p)];
    const double prev = dense_[static_cast<std::size_t>(n / p)];
    if (info_.level % p == 0) {
      dense_[un] = lp * prev;
    } else {
      const double prev2 = dense_[static_cast<std::size_t>(n / p / p)];
      dense_[un] = lp * prev - prev2;
    }
  }

  scaled_.assign(size, 0.0);
  for (std::size_t n = 1; n < size; ++n) scaled_[n] = dense_[n] / std::sqrt(static_cast<double>(n));
}

double EigenvalueTable::at_prime(i64 p) const {
  if (p > limit_)
    throw CapacityError("lambda_p: p=" + std::to_string(p) + " beyond provider limit " + std::to_string(limit_) +
                        " for " + info_.label);
  if (p < 2) throw DomainError("lambda_p: p must be prime");
  const auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
  if (it == primes_.end() || *it != p) throw DomainError("lambda_p: " + std::to_string(p) + " is not prime");
  return prime_values_[static_cast<std::size_t>(it - primes_.begin())];
}

double EigenvalueTable::coefficient(i64 n) const {
  if (n < 1) throw DomainError("lambda_n: n must be >= 1");
  if (n > limit_)
    throw CapacityError("lambda_n: n=" + std::to_string(n) + " beyond provider limit for " + info_.label);
  return dense_[static_cast<std::size_t>(n)];
}

HeckeForm::HeckeForm(std::shared_ptr<const EigenvalueTable> table) : table_(std::move(table)) {
  if (!table_) throw DomainError("HeckeForm: null eigenvalue table");
}

double HeckeForm::lambda_n(i64 n) const {
  if (n < 1) throw DomainError("lambda_n: n must be >= 1");
  if (n <= limit()) return table_->coefficient(n);
  double result = 1.0;
  i64 m = n;
  for (i64 p = 2; p * p <= m; ++p) {
    if (m % p) continue;
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    const double lp = lambda_p(p);
    double prev2 = 1.0, prev = lp;
    for (int j = 2; j <= e; ++j) {
      const double next = is_bad(p) ? lp * prev : lp * prev - prev2;
      prev2 = prev;
      prev = next;
    }
    result *= prev;
  }
  if (m > 1) result *= lambda_p(m);
  return result;
}

double HeckeForm::big_lambda(i64 p, int n) const {
  if (is_bad(p)) throw DomainError("big_lambda: p=" + std::to_string(p) + " divides the level");
  if (n < 1) throw DomainError("big_lambda: n >= 1 required");
  const double lp = lambda_p(p);
  double s_prev = 2.0, s = lp;
  for (int j = 2; j <= n; ++j) {
    const double next = lp * s - s_prev;
    s_prev = s;
    s = next;
  }
  return s;
}

double HeckeForm::sym2_lambda(i64 p) const {
  if (is_bad(p)) throw DomainError("sym2_lambda: p=" + std::to_string(p) + " divides the level");
  const double lp = lambda_p(p);
  return lp * lp - 1.0;
}

double HeckeForm::local_power_sum(i64 p, int n) const {
  if (!is_bad(p)) return big_lambda(p, n);
  return std::pow(lambda_p(p), n);
}

int root_number_twist(const HeckeForm& form, const Discriminant& d) {
  if (gcd(d.absval, form.level()) != 1)
    throw DomainError("root_number_twist: gcd(d, N) > 1 for d=" + std::to_string(d.d) + ", " + form.label());
  return form.root_number() * kronecker(d.d, -form.level());
}

bool residue_is_admissible(std::span<const HeckeForm> forms, int sigma, i64 a, i64 N0) {
  if (mod(a, 4) != 1 || gcd(mod(a, N0), N0) != 1) return false;
  for (const auto& f : forms)
    if (N0 % f.level() != 0) return false;
  int probed = 0;
  for (i64 n = mod(sigma * a, N0); probed < kResidueProbeSize; n += N0) {
    if (n == 0 || (sigma == 1 && n == 1) || !is_squarefree(n)) continue;
    const auto d = Discriminant{sigma * n, sigma, n};
    for (const auto& f : forms)
      if (root_number_twist(f, d) != 1) return false;
    ++probed;
  }
  return true;
}

std::optional<ResidueClass> find_admissible_residue(std::span<const HeckeForm> forms, int sigma) {
  if (forms.empty()) throw ConfigError("find_admissible_residue: empty form list");
  if (sigma != 1 && sigma != -1) throw ConfigError("find_admissible_residue: sigma must be +1 or -1");
  i64 N0 = 8;
  for (const auto& f : forms) N0 = lcm(N0, f.level());
  for (i64 a = 1; a < N0; a += 4) {
    if (gcd(a, N0) != 1) continue;
    if (residue_is_admissible(forms, sigma, a, N0)) return ResidueClass{a, N0};
  }
  return std::nullopt;
}

void write_table_file(const std::filesystem::path& path, const EigenvalueTable& table) {
  const auto& info = table.info();
  std::string out = "#form " + info.label + " weight " + std::to_string(info.weight) + " level " +
                    std::to_string(info.level) + " eps " + (info.root_number > 0 ? "+1" : "-1") + " limit " +
                    std::to_string(table.limit()) + "\n";
  const auto& primes = table.primes();
  const auto values = table.prime_values();
  for (std::size_t i = 0; i < primes.size(); ++i) out += std::to_string(primes[i]) + " " + fmt17(values[i]) + "\n";
  write_file_atomic(path, out);
}

HeckeForm read_table_file(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::string header;
  if (!std::getline(in, header)) throw IoError(path.string() + ": empty table file");
  FormInfo info;
  info.source = EigenSource::TableFile;
  i64 limit = 0;  // from the header, else the last listed prime
  {
    std::istringstream hs(header);
    std::string tag, kw_weight, kw_level, kw_eps, eps;
    hs >> tag >> info.label >> kw_weight >> info.weight >> kw_level >> info.level >> kw_eps >> eps;
    if (!hs || tag != "#form" || kw_weight != "weight" || kw_level != "level" || kw_eps != "eps")
      throw IoError(path.string() + ": malformed header, expected '#form <label> weight <k> level <N> eps <±1>'");
    info.root_number = std::stoi(eps);
    std::string kw_limit;
    if (hs >> kw_limit) {
      if (kw_limit != "limit" || !(hs >> limit) || limit < 2)
        throw IoError(path.string() + ": malformed header, expected an optional 'limit <n>' after eps");
    }
  }
  std::vector<i64> primes;
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    i64 p = 0;
    double v = 0;
    if (!(ls >> p >> v)) throw IoError(path.string() + ": malformed line '" + line + "'");
    primes.push_back(p);
    values.push_back(v);
  }
  if (primes.empty()) throw IoError(path.string() + ": no eigenvalues");
  if (limit == 0) limit = primes.back();
  const auto expected = sieve_primes(std::max<i64>(limit, 2)).primes;
  if (expected != primes) throw CapacityError(path.string() + ": table does not list exactly the primes <= " +
                                              std::to_string(limit));
  return HeckeForm(std::make_shared<const EigenvalueTable>(info, limit, values));
}

}  // namespace twistlab
