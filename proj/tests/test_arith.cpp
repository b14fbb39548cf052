#include <functional>
#include <numeric>
#include <set>
#include <random>

#include "test_support.hpp"
#include "twistlab/arith.hpp"

using namespace twistlab;

namespace {

int euler_legendre(i64 d, i64 p) {
  i64 r = 1, b = mod(d, p), e = (p - 1) / 2;
  for (; e > 0; e >>= 1, b = b * b % p)
    if (e & 1) r = r * b % p;
  return r == 0 ? 0 : (r == 1 ? 1 : -1);
}

bool trial_prime(i64 n) {
  if (n < 2) return false;
  for (i64 q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

bool naive_squarefree(i64 n) {
  for (i64 q = 2; q * q <= n; ++q)
    if (n % (q * q) == 0) return false;
  return true;
}

// All products of pairwise coprime prime discriminants -4, 8, -8, (-1)^{(p-1)/2} p with |d| <= bound.
std::set<i64> fundamental_by_factors(i64 bound) {
  std::vector<i64> odd;
  for (i64 p = 3; p <= bound; p += 2)
    if (trial_prime(p)) odd.push_back(p % 4 == 1 ? p : -p);
  std::set<i64> out{1};
  std::function<void(std::size_t, i64)> grow = [&](std::size_t i, i64 prod) {
    for (std::size_t j = i; j < odd.size(); ++j) {
      const i64 next = prod * odd[j];
      if (std::llabs(next) > bound) continue;
      out.insert(next);
      grow(j + 1, next);
    }
  };
  grow(0, 1);
  const std::set<i64> odd_part = out;
  for (i64 two : {-4, 8, -8})
    for (i64 m : odd_part)
      if (std::llabs(two * m) <= bound) out.insert(two * m);
  return out;
}

std::vector<i64> naive_family(i64 D, int sigma, i64 a, i64 N0) {
  std::vector<i64> out;
  for (i64 t = D; t <= 2 * D; ++t) {
    const i64 d = sigma * t;
    if (d == 1 || mod(d - a, N0) != 0 || !naive_squarefree(t)) continue;
    out.push_back(d);
  }
  return out;
}

}  // namespace

TEST_CASE("sieve_primes examples and trial division") {
  CHECK(sieve_primes(10).primes == std::vector<i64>{2, 3, 5, 7});
  CHECK(sieve_primes(2).primes == std::vector<i64>{2});
  CHECK(sieve_primes(1'000'000).size() == 78498);
  CHECK_THROWS_AS(sieve_primes(1), DomainError);
  const auto t = sieve_primes(100000);
  std::size_t k = 0;
  for (i64 n = 2; n <= 100000; ++n)
    if (trial_prime(n)) {
      REQUIRE(k < t.size());
      CHECK(t.primes[k++] == n);
    }
  CHECK(k == t.size());
  CHECK(t.count_up_to(100) == 25);
}

TEST_CASE("kronecker examples") {
  CHECK(kronecker(1, 7) == 1);
  CHECK(kronecker(-4, 2) == 0);
  CHECK(kronecker(5, 3) == -1);
  CHECK(kronecker(-3, -1) == -1);
  CHECK(kronecker(5, -1) == 1);
  CHECK(kronecker(8, 1) == 1);
  CHECK(kronecker(5, 2) == -1);
  CHECK(kronecker(17, 2) == 1);
  CHECK(kronecker(0, 1) == 1);
  CHECK(kronecker(0, 2) == 0);
}

TEST_CASE("kronecker agrees with Euler's criterion at odd primes") {
  const auto primes = sieve_primes(500);
  for (i64 d = -100; d <= 100; ++d) {
    if (d == 0 || !is_fundamental(d)) continue;
    for (i64 p : primes.primes)
      if (p > 2) CHECK(kronecker(d, p) == euler_legendre(d, p));
  }
}

TEST_CASE("kronecker is completely multiplicative and periodic") {
  for (i64 d = -100; d <= 100; ++d) {
    if (d == 0 || !is_fundamental(d)) continue;
    for (i64 m = 1; m <= 60; ++m)
      for (i64 n = 1; n <= 60; ++n) REQUIRE(kronecker(d, m * n) == kronecker(d, m) * kronecker(d, n));
    for (i64 n = 1; n <= 300; ++n) REQUIRE(kronecker(d, n + std::llabs(d)) == kronecker(d, n));
  }
}

TEST_CASE("character sums vanish over a period") {
  for (i64 d = -200; d <= 200; ++d) {
    if (d == 0 || d == 1 || !is_fundamental(d)) continue;
    i64 s = 0;
    for (i64 n = 1; n <= std::llabs(d); ++n) s += kronecker(d, n);
    CHECK(s == 0);
  }
}

TEST_CASE("character_table matches kronecker") {
  for (i64 d : {5, -3, -4, 8, -8, 12, 1001, -20}) {
    const auto D = Discriminant::make(d);
    const auto chi = character_table(D);
    REQUIRE(chi.size() == static_cast<std::size_t>(std::llabs(d)));
    for (i64 n = 0; n < std::llabs(d); ++n) CHECK(chi[static_cast<std::size_t>(n)] == kronecker(d, n));
  }
}

TEST_CASE("is_fundamental") {
  CHECK(is_fundamental(5));
  CHECK(is_fundamental(-4));
  CHECK(is_fundamental(12));
  CHECK_FALSE(is_fundamental(9));
  CHECK(is_fundamental(1));
  CHECK_THROWS_AS(is_fundamental(0), DomainError);
  const auto expected = fundamental_by_factors(100);
  for (i64 d = -100; d <= 100; ++d)
    if (d != 0) CHECK_MESSAGE(is_fundamental(d) == (expected.count(d) > 0), "d = " << d);
  CHECK_THROWS_AS(Discriminant::make(9), DomainError);
}

TEST_CASE("squarefree_sieve") {
  CHECK(squarefree_sieve(8, 12) == std::vector<i64>{10, 11});
  CHECK(squarefree_sieve(49, 49).empty());
  std::vector<i64> naive;
  for (i64 n = 2; n <= 20; ++n)
    if (naive_squarefree(n)) naive.push_back(n);
  CHECK(squarefree_sieve(2, 20) == naive);
  const auto big = squarefree_sieve(100000, 101000);
  std::size_t k = 0;
  for (i64 n = 100000; n <= 101000; ++n)
    if (naive_squarefree(n)) CHECK(big[k++] == n);
  CHECK(k == big.size());
}

TEST_CASE("enumerate_family examples") {
  std::vector<i64> got;
  for (const auto& d : enumerate_family(10, 1, 1, 8).members) got.push_back(d.d);
  CHECK(got == std::vector<i64>{17});
  got.clear();
  for (const auto& d : enumerate_family(10, -1, 1, 8).members) got.push_back(d.d);
  CHECK(got == naive_family(10, -1, 1, 8));
  CHECK(enumerate_family(2, 1, 1, 8).members.empty());  // d = 1 is never a member
}

TEST_CASE("enumerate_family equals the naive filter") {
  for (i64 D : {2, 3, 16, 50, 99, 512, 1000, 4321, 10000})
    for (int sigma : {1, -1})
      for (auto [a, N0] : std::vector<std::pair<i64, i64>>{{1, 8}, {5, 8}, {5, 88}, {13, 616}}) {
        const auto slice = enumerate_family(D, sigma, a, N0);
        std::vector<i64> got;
        for (const auto& d : slice.members) {
          got.push_back(d.d);
          CHECK(is_fundamental(d.d));
          CHECK(d.absval == std::llabs(d.d));
        }
        CHECK(got == naive_family(D, sigma, a, N0));
      }
}

TEST_CASE("streaming enumeration matches the materialized slice") {
  for (int sigma : {1, -1}) {
    const auto slice = enumerate_family(30000, sigma, 5, 8);
    std::vector<Discriminant> streamed;
    for_each_family_member(30000, sigma, 5, 8, [&](const Discriminant& d) { streamed.push_back(d); });
    CHECK(streamed == slice.members);
  }
}

TEST_CASE("family parameter validation") {
  CHECK_THROWS_AS(enumerate_family(1, 1, 1, 8), ConfigError);
  CHECK_THROWS_AS(enumerate_family(100, 1, 3, 8), ConfigError);
  CHECK_THROWS_AS(enumerate_family(100, 1, 5, 12), ConfigError);
  CHECK_THROWS_AS(enumerate_family(100, 1, 9, 24), ConfigError);
  CHECK_THROWS_AS(enumerate_family(100, 2, 1, 8), ConfigError);
  try {
    enumerate_family(100, 1, 3, 8);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("1 (mod 4)") != std::string::npos);
  }
}

TEST_CASE("gcd, lcm, isqrt") {
  CHECK(gcd(12, -18) == 6);
  CHECK(lcm(8, 11) == 88);
  CHECK(lcm(lcm(8, 11), 14) == 616);
  for (i64 n : {0LL, 1LL, 15LL, 16LL, 17LL, 999999999999LL, 1000000000000LL}) {
    const i64 r = isqrt(n);
    CHECK(r * r <= n);
    CHECK((r + 1) * (r + 1) > n);
  }
}
