#include <numbers>
#include <random>

#include "test_support.hpp"
#include "twistlab/kernels.hpp"
#include "twistlab/lfunc.hpp"
#include "twistlab/special.hpp"
#include "twistlab/tau.hpp"

using namespace twistlab;
using tltest::oracles;
using tltest::registry;

namespace {

HeckeForm form_for(const std::string& name, i64 max_abs_d, const AfeParams& afe = {}) {
  if (name == "delta") return registry().get(name, required_table_limit(12, 1, max_abs_d, afe));
  return registry().get(name, required_table_limit(2, registry().curve(name).conductor, max_abs_d, afe));
}

}  // namespace

TEST_CASE("conductor") {
  const auto delta = form_for("delta", 10);
  const auto e11 = form_for("11a1", 10);
  CHECK(conductor(delta, Discriminant::make(5)) == 25);
  CHECK(conductor(e11, Discriminant::make(13)) == 1859);
  CHECK_THROWS_AS(conductor(e11, Discriminant::make(-11)), DomainError);
}

TEST_CASE("afe_kernel") {
  for (double y : {0.01, 0.1, 0.5, 1.0, 2.0}) CHECK(afe_kernel(y, 2) == doctest::Approx(std::exp(-2 * std::numbers::pi * y)).epsilon(1e-14));
  CHECK(afe_kernel(1e-12, 12) == doctest::Approx(1.0).epsilon(1e-12));
  const double z = 2 * std::numbers::pi;
  CHECK(std::fabs(gamma_q_series(6, z) - gamma_q_continued_fraction(6, z)) < 1e-12);
  CHECK(afe_kernel(1.0, 12) == doctest::Approx(gamma_q_integer(6, z)).epsilon(1e-13));
  for (int k : {2, 4, 12, 24}) {
    double prev = 1.0;
    for (double y = 0.05; y < 6; y += 0.05) {
      const double v = afe_kernel(y, k);
      CHECK(v < prev);
      CHECK(v > 0);
      prev = v;
    }
  }
}

TEST_CASE("incomplete gamma branches against the finite form") {
  for (int a : {1, 2, 3, 6, 13})
    for (double z : {0.25, 0.5, 1.0, 3.0, 7.0, 12.0, 20.0, 40.0}) {
      const double exact = gamma_q_integer(a, z);
      if (z < a + 1) {
        CHECK(gamma_q_series(a, z) == doctest::Approx(exact).epsilon(1e-13));
      } else {
        CHECK(gamma_q_continued_fraction(a, z) == doctest::Approx(exact).epsilon(1e-12));
      }
      CHECK(gamma_q(a, z) == doctest::Approx(exact).epsilon(1e-12));
    }
  for (double a : {0.5, 2.5, 7.5})
    for (double z = a + 0.5; z <= a + 3; z += 0.5) {
      const double s = gamma_q_series(a, z), c = gamma_q_continued_fraction(a, z);
      CHECK(s == doctest::Approx(c).epsilon(1e-11));
    }
}

TEST_CASE("truncation bound and length") {
  for (int k : {2, 12}) {
    double prev = 1e300;
    for (i64 M = 100; M <= 10000; M += 100) {
      const double b = truncation_error_bound(k, 1e6, M);
      CHECK(b <= prev);
      prev = b;
    }
    const AfeParams p;
    const i64 M = truncation_length(k, 1e6, p);
    CHECK(truncation_error_bound(k, 1e6, M) <= p.rel_tolerance);
    CHECK(M >= static_cast<i64>(std::ceil(p.trunc_multiplier * 1000)));
  }
  AfeParams bad;
  bad.trunc_multiplier = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("central values against PARI") {
  int compared = 0;
  for (const auto& [key, value] : oracles()) {
    if (key.rfind("L_", 0) != 0) continue;
    const auto sep = key.rfind('_');
    const std::string name = key.substr(2, sep - 2);
    const i64 d = std::stoll(key.substr(sep + 1));
    const double expected = std::stod(value);
    const auto f = form_for(name, std::llabs(d));
    const auto L = central_value(f, Discriminant::make(d));
    if (L.eps_twist == -1) {
      CHECK_MESSAGE(L.value == 0.0, key);
      CHECK(L.err_bound == 0.0);
      CHECK(std::fabs(expected) < 1e-20);
      CHECK(L.has(kNumericallyVanishing));
    } else {
      CHECK_MESSAGE(std::fabs(L.value - expected) <= 1e-8 * std::max(1.0, std::fabs(expected)), key);
      CHECK(L.err_bound <= 1e-8 * std::max(1.0, std::fabs(L.value)));
    }
    ++compared;
  }
  CHECK(compared >= 30);
  const auto L = central_value(form_for("11a1", 1), Discriminant::make(1));
  CHECK(L.value == doctest::Approx(0.253842).epsilon(4e-4));
}

TEST_CASE("root-number dichotomy on a slice") {
  const auto e11 = form_for("11a1", 4000);
  for (const auto& d : enumerate_family(2000, -1, 1, 8).members) {
    if (d.absval % 11 == 0) continue;
    const auto L = central_value(e11, d);
    CHECK(L.eps_twist == kronecker(d.d, -11));
    if (L.eps_twist == -1) CHECK(L.value == 0.0);
  }
}

TEST_CASE("doubling the truncation multiplier stays within the error bound") {
  AfeParams p3, p6;
  p6.trunc_multiplier = 6;
  std::mt19937_64 rng(2024);
  const std::vector<std::string> names = {"delta", "11a1", "14a1", "37b1"};
  std::uniform_int_distribution<i64> pick(-10000, 10000);
  int done = 0;
  while (done < 40) {
    const i64 d = pick(rng);
    if (d == 0 || d == 1 || !is_fundamental(d)) continue;
    const auto& name = names[static_cast<std::size_t>(done) % names.size()];
    const auto f = form_for(name, std::llabs(d), p6);
    if (gcd(d, f.level()) != 1) continue;
    const auto a = central_value(f, Discriminant::make(d), p3);
    const auto b = central_value(f, Discriminant::make(d), p6);
    CHECK(std::fabs(a.value - b.value) <= a.err_bound + b.err_bound);
    CHECK(b.terms >= a.terms);
    ++done;
  }
}

TEST_CASE("short tables raise capacity errors") {
  const HeckeForm small(std::make_shared<const EigenvalueTable>(tau_table(100)));
  CHECK_THROWS_AS(central_value(small, Discriminant::make(1001)), CapacityError);
}

TEST_CASE("log_central_value") {
  const auto delta = form_for("delta", 1001);
  const auto L = central_value(delta, Discriminant::make(1001));
  const auto lg = log_central_value(L);
  REQUIRE(lg);
  CHECK(std::exp(*lg) == doctest::Approx(L.value).epsilon(1e-10));
  CHECK_FALSE(log_central_value(delta, Discriminant::make(-3)));
  LValue e;
  e.value = std::exp(1.0);
  e.err_bound = 1e-9;
  CHECK(*log_central_value(e) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("first moment of level-1 twists is of order one") {
  const auto delta = form_for("delta", 20000);
  const auto slice = enumerate_family(10000, 1, 1, 8);
  const auto vals = central_values(delta, slice.members, AfeParams{});
  double s = 0;
  for (const auto& v : vals) s += v.value;
  const double mean = s / static_cast<double>(vals.size());
  CHECK(mean > 0.1);
  CHECK(mean < 10);
}

TEST_CASE("parallel and serial central values are bit-identical") {
  const auto e11 = form_for("11a1", 6000);
  const auto slice = enumerate_family(3000, 1, 5, 88);
  const auto serial = central_values_serial(e11, slice.members, AfeParams{});
  for (int threads : {1, 4, 8}) {
    set_thread_count(threads);
    const auto par = central_values(e11, slice.members, AfeParams{});
    REQUIRE(par.size() == serial.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
      REQUIRE(par[i].value == serial[i].value);
      REQUIRE(par[i].err_bound == serial[i].err_bound);
    }
  }
  set_thread_count(1);
}

TEST_CASE("parallel_map rethrows the lowest failing index") {
  set_thread_count(4);
  try {
    parallel_map(100, [](std::size_t i) -> int {
      if (i == 17 || i == 63) throw std::runtime_error("fail " + std::to_string(i));
      return static_cast<int>(i);
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "fail 17");
  }
  set_thread_count(1);
}

TEST_CASE("flags_string") {
  CHECK(flags_string(0) == "-");
  CHECK(flags_string(kNumericallyVanishing | kNegativeAnomaly) == "vanishing|negative");
}
