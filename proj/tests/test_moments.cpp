#include <algorithm>
#include <numbers>

#include "naive_oracle.hpp"
#include "test_support.hpp"
#include "twistlab/kernels.hpp"
#include "twistlab/moments.hpp"

using namespace twistlab;
using tltest::registry;

namespace {

MomentRequest make_request(const std::vector<std::pair<std::string, double>>& forms, i64 D, int sigma = 1) {
  MomentRequest req;
  req.D = D;
  req.sigma = sigma;
  std::vector<HeckeForm> plain;
  for (const auto& [name, ell] : forms) {
    const i64 limit = name == "delta" ? required_table_limit(12, 1, 2 * D, req.afe)
                                      : required_table_limit(2, registry().curve(name).conductor, 2 * D, req.afe);
    req.forms.push_back({registry().get(name, limit), ell});
    plain.push_back(req.forms.back().form);
  }
  const auto rc = find_admissible_residue(plain, sigma);
  REQUIRE(rc);
  req.a = rc->a;
  req.N0 = rc->N0;
  return req;
}

std::vector<i64> raw(const FamilySlice& s) {
  std::vector<i64> out;
  for (const auto& d : s.members) out.push_back(d.d);
  return out;
}

}  // namespace

TEST_CASE("mixed moment matches the naive evaluator on small families") {
  for (const auto& spec : std::vector<std::vector<std::pair<std::string, double>>>{
           {{"delta", 1.0}}, {{"delta", 2.5}}, {{"delta", 1.0}, {"11a1", 1.0}}, {{"11a1", 1.0}, {"14a1", 2.0}}}) {
    i64 D = 50;
    auto req = make_request(spec, D);
    while (enumerate_family(D, 1, req.a, req.N0).size() == 0) req = make_request(spec, D *= 2);
    const auto rep = mixed_moment(req);
    const auto slice = enumerate_family(D, 1, req.a, req.N0);
    std::vector<HeckeForm> forms;
    std::vector<double> ells;
    for (std::size_t i = 0; i < spec.size(); ++i) {
      forms.push_back(registry().get(spec[i].first, tltest::naive_table_limit(req.forms[i].form.level(), 2 * D)));
      ells.push_back(spec[i].second);
    }
    const long double expect = tltest::naive_mixed_moment(forms, ells, raw(slice), D);
    CHECK(std::fabs(rep.mixed_moment - static_cast<double>(expect)) <= 1e-8 * std::fabs(static_cast<double>(expect)) + 1e-14);
    CHECK(rep.mixed_moment_per_member ==
          doctest::Approx(rep.mixed_moment * static_cast<double>(D) / static_cast<double>(slice.size())));
  }
}

TEST_CASE("zero exponents count the family") {
  auto req = make_request({{"delta", 0.0}}, 2000);
  const auto rep = mixed_moment(req);
  CHECK(rep.mixed_moment == static_cast<double>(rep.family_size) / 2000.0);
  auto pair = make_request({{"delta", 0.0}, {"11a1", 0.0}}, 2000);
  const auto rep2 = mixed_moment(pair);
  CHECK(rep2.mixed_moment == static_cast<double>(rep2.family_size) / 2000.0);
}

TEST_CASE("permuting the form list leaves the moment bit-identical") {
  auto a = make_request({{"delta", 1.0}, {"11a1", 2.0}}, 3000);
  auto b = a;
  std::reverse(b.forms.begin(), b.forms.end());
  const auto ra = mixed_moment(a), rb = mixed_moment(b);
  CHECK(ra.mixed_moment == rb.mixed_moment);
  CHECK(ra.labels == rb.labels);
  CHECK(ra.log_mean == rb.log_mean);
}

TEST_CASE("parallel and serial family statistics agree exactly") {
  auto par = make_request({{"delta", 1.0}, {"11a1", 1.0}}, 3000);
  auto ser = par;
  ser.parallel = false;
  set_thread_count(4);
  const auto a = decorrelation_diagnostics(par);
  set_thread_count(1);
  const auto b = decorrelation_diagnostics(ser);
  CHECK(a.mixed_moment == b.mixed_moment);
  CHECK(a.log_cov == b.log_cov);
  CHECK(a.decorrelation_ratio == b.decorrelation_ratio);
}

TEST_CASE("first moment of Delta at D = 1e4") {
  const auto rep = mixed_moment(make_request({{"delta", 1.0}}, 10000));
  CHECK(rep.mixed_moment > 0.05);
  CHECK(rep.mixed_moment < 5);
  CHECK(rep.mixed_moment == doctest::Approx(tltest::frozen("first_moment_delta_10000")).epsilon(1e-9));
}

TEST_CASE("request validation") {
  auto req = make_request({{"11a1", 1.0}}, 1000);
  req.a = req.a == 1 ? 5 : 1;
  bool other_admissible = residue_is_admissible(std::vector<HeckeForm>{req.forms[0].form}, 1, req.a, req.N0);
  if (!other_admissible) {
    try {
      req.validate();
      FAIL("expected a configuration error");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("inadmissible residue class") != std::string::npos);
    }
  }
  auto neg = make_request({{"delta", 1.0}}, 1000);
  neg.forms[0].ell = -1;
  CHECK_THROWS_AS(neg.validate(), ConfigError);
  auto one = make_request({{"delta", 1.0}}, 1000);
  CHECK_THROWS_AS(decorrelation_diagnostics(one), ConfigError);
}

TEST_CASE("duplicated form gives correlation one with a warning") {
  auto req = make_request({{"11a1", 1.0}, {"11a1", 1.0}}, 3000);
  const auto rep = decorrelation_diagnostics(req);
  CHECK(std::fabs(rep.log_corr[0][1] - 1.0) < 1e-10);
  CHECK(rep.log_cov[0][1] == doctest::Approx(rep.log_var[0]).epsilon(1e-12));
  CHECK_FALSE(rep.warnings.empty());
}

TEST_CASE("covariance matrix is symmetric and counts are bounded") {
  const auto rep = decorrelation_diagnostics(make_request({{"delta", 1.0}, {"11a1", 1.0}}, 5000));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(rep.log_cov[i][j] == rep.log_cov[j][i]);
      CHECK(rep.pair_count[i][j] <= rep.family_size);
    }
  CHECK(rep.excluded_zero_count <= rep.family_size);
  CHECK(rep.family_size > 0);
}

TEST_CASE("tail counts") {
  auto req = make_request({{"delta", 1.0}}, 1000);
  const auto fv = family_values(req);
  ProxyParams params;
  params.x = params.y = 1000;
  params.z = ProxyParams::default_z(1000, 1000);
  params.weights = req.forms;
  const std::vector<double> grid = {-1e9, -2, -1, 0, 0.5, 1, 2, 3, 1e9};
  const auto A = large_value_count(fv.slice, params, grid);
  const auto B = b_count(fv, grid);
  CHECK(A.kind == TailKind::AProxy);
  CHECK(B.kind == TailKind::BLogL);
  CHECK(A.counts.front() == fv.slice.size());
  CHECK(A.counts.back() == 0);
  CHECK(B.counts.back() == 0);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    CHECK(A.counts[k] <= A.counts[k - 1]);
    CHECK(B.counts[k] <= B.counts[k - 1]);
  }
  const auto Binf = b_count(fv, {-std::numeric_limits<double>::infinity()});
  CHECK(Binf.counts[0] == Binf.family_size - Binf.excluded_zero_count);
  for (std::size_t k = 0; k < 4; ++k) {
    const std::vector<double> fixture_grid = {0, 1, 2, 3};
    const auto A4 = large_value_count(fv.slice, params, fixture_grid);
    const auto B4 = b_count(fv, fixture_grid);
    CHECK(static_cast<double>(A4.counts[k]) == tltest::frozen("A_count_1000_V" + std::to_string(k)));
    CHECK(static_cast<double>(B4.counts[k]) == tltest::frozen("B_count_1000_V" + std::to_string(k)));
  }
}

TEST_CASE("B counts vanish on an all-odd slice") {
  const auto delta = registry().get("delta", 20000);
  FamilyValues fv;
  fv.slice = enumerate_family(1000, -1, 1, 8);
  fv.forms = {{delta, 1.0}};
  fv.values = {central_values(delta, fv.slice.members, AfeParams{})};
  const auto B = b_count(fv, {-std::numeric_limits<double>::infinity(), 0, 1});
  for (auto c : B.counts) CHECK(c == 0);
  CHECK(B.excluded_zero_count == fv.slice.size());
}

TEST_CASE("empirical A stays far below the tail bound") {
  const i64 D = 10000;
  ProxyParams params;
  params.x = params.y = static_cast<double>(D);
  params.z = ProxyParams::default_z(params.x, D);
  params.weights = {{registry().get("delta", D), 1.0}};
  const std::vector<double> grid = {1.5, 2, 2.5, 3, 4, 5};
  const auto A = large_value_count(enumerate_family(D, 1, 1, 8), params, grid);
  for (std::size_t k = 0; k < grid.size(); ++k)
    CHECK(static_cast<double>(A.counts[k]) <= 50 * tail_bound_formula(grid[k], D, {1.0}, 0.1).value);
}

TEST_CASE("variance and mean formulas") {
  const auto ee = static_cast<i64>(std::exp(std::numbers::e));  // 15: below the domain
  CHECK_THROWS_AS(sigma_sq({1.0}, ee), DomainError);
  CHECK_THROWS_AS(eta({1.0}, 15, 0.1), DomainError);
  const double ll6 = std::log(std::log(1e6));
  CHECK(sigma_sq({1.0, 1.0}, 1'000'000) == doctest::Approx(2 * ll6).epsilon(1e-14));
  CHECK(sigma_sq({1.0, 1.0}, 1'000'000) == doctest::Approx(5.2517).epsilon(1e-4));
  CHECK(sigma_sq({2.0}, 1'000'000) == doctest::Approx(10.5034).epsilon(1e-4));
  CHECK(eta({1.0}, 1'000'000, 0.5) == 0.0);
  CHECK(eta({1.0, 1.0}, 1'000'000, 0.1) == doctest::Approx(-2.1007).epsilon(1e-4));
  CHECK(eta({1.0, 1.0}, 1'000'000, 0.1) == doctest::Approx(-0.4 * 2 * ll6).epsilon(1e-14));
}

TEST_CASE("tail bound formula") {
  const i64 D = 1'000'000;
  const double ll = std::log(std::log(1e6));
  const double V = 3, eps = 0.1, s2 = ll;
  const double expect =
      1e6 * (std::exp(-(1 - 2 * eps) * V * V / (2 * s2)) * ll * ll * ll + std::exp(-(eps / 11) * V * std::log(V)));
  const auto tb = tail_bound_formula(V, D, {1.0}, eps);
  CHECK(tb.value == doctest::Approx(expect).epsilon(1e-12));
  CHECK(tb.in_range);
  const double Vs = sigma_sq({1.0}, D);
  const double at_sigma =
      1e6 * (std::exp(-(1 - 2 * eps) * Vs / 2) * ll * ll * ll + std::exp(-(eps / 11) * Vs * std::log(Vs)));
  CHECK(tail_bound_formula(Vs, D, {1.0}, eps).value == doctest::Approx(at_sigma).epsilon(1e-12));
  CHECK_FALSE(tail_bound_formula(0.5, D, {1.0}, eps).in_range);
  CHECK_FALSE(tail_bound_formula(100, D, {1.0}, eps).in_range);
}

TEST_CASE("tail regime annotations") {
  const i64 D = 1'000'000;
  const double ll = std::log(std::log(1e6));
  const auto small = tail_regime(0.05, D, {1.0}, 0.1);
  CHECK(small.small_v);
  CHECK(small.r_second == 0);
  const auto big = tail_regime(200, D, {1.0}, 0.1);
  CHECK_FALSE(big.small_v);
  CHECK(big.r_first == 2);
  CHECK(big.r_second == 2);
  const auto mid = tail_regime(0.2, D, {1.0}, 0.1);
  CHECK(mid.small_v == (0.2 <= 0.01 * ll * ll));
  CHECK(mid.V1 == doctest::Approx(0.9 * 0.2));
  CHECK(mid.V2 == doctest::Approx(0.1 * 0.2));
  CHECK(mid.x == doctest::Approx(std::pow(1e6, 1 / (0.1 * 0.2))));
}

TEST_CASE("Gaussian integral") {
  CHECK(gaussian_integral_identity(1) == doctest::Approx(std::sqrt(2 * std::numbers::pi) * std::exp(0.5)).epsilon(1e-15));
  CHECK(gaussian_integral_identity(1) == doctest::Approx(4.13273).epsilon(1e-5));
  CHECK(gaussian_integral_identity(2) == doctest::Approx(37.0432).epsilon(1e-5));
  for (double s : {0.5, 1.0, 2.0, 3.0})
    CHECK(std::fabs(gaussian_integral_quadrature(s) / gaussian_integral_identity(s) - 1) < 1e-8);
}

TEST_CASE("large-sieve moment check") {
  const auto delta = registry().get("delta", 1000);
  const auto one = [](i64) { return 1.0; };
  // x = 2: only p = 2, every member is odd, so lhs = family_size / 2.
  const auto r2 = lemma21_check(2000, 1, 2, one, 1, 1, 8, RangePolicy::Extended);
  CHECK(r2.lhs == doctest::Approx(static_cast<double>(r2.family_size) / 2).epsilon(1e-14));
  const auto empty = lemma21_check(2000, 2, std::pow(2000.0, 1 / 20.0), one);
  CHECK(empty.lhs == 0.0);
  CHECK(empty.rhs == 0.0);
  CHECK(empty.in_range);
  CHECK_THROWS_AS(lemma21_check(2000, 1, 13, one), DomainError);
  // lhs against a direct expansion.
  const auto ap = [&](i64 p) { return delta.lambda_p(p); };
  const auto r = lemma21_check(4000, 1, 13, ap, 1, 1, 8, RangePolicy::Extended);
  CHECK_FALSE(r.in_range);
  double lhs = 0;
  for (const auto& d : enumerate_family(4000, 1, 1, 8).members) {
    double inner = 0;
    for (i64 p : {2, 3, 5, 7, 11, 13}) inner += ap(p) * kronecker(d.d, p) / std::sqrt(static_cast<double>(p));
    lhs += inner * inner;
  }
  CHECK(r.lhs == doctest::Approx(lhs).epsilon(1e-12));
  for (i64 D : {2000, 4000, 8000, 16000})
    for (double x : {2.0, 3.0, 5.0, 7.0, 11.0, 13.0}) {
      const auto c = lemma21_check(D, 1, x, ap, 1, 1, 8, RangePolicy::Extended);
      CHECK(c.lhs <= 5 * c.rhs);
    }
}

TEST_CASE("exponent sweep") {
  auto tmpl = make_request({{"delta", 1.0}}, 8000);
  CHECK_THROWS_AS(exponent_sweep(tmpl, {1000, 2000}), ConfigError);
  CHECK_THROWS_AS(exponent_sweep(tmpl, {1000, 4000, 2000}), ConfigError);
  const auto fit = exponent_sweep(tmpl, {1000, 2000, 4000, 8000});
  CHECK(fit.predicted == 0.0);
  CHECK(fit.residuals.size() == 4);
  CHECK(std::isfinite(fit.slope));
  auto sq = make_request({{"delta", 2.0}}, 1000);
  CHECK(exponent_sweep(sq, {100, 200, 400}).predicted == 1.0);
  CHECK(tltest::frozen("sweep_slope_delta") > -0.5);
  CHECK(tltest::frozen("sweep_slope_delta") < 0.5);
}
