#include "twistlab/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>
#include <vector>

#include "twistlab/error.hpp"
#include "twistlab/io.hpp"

namespace twistlab {

namespace {

using u128 = unsigned __int128;
constexpr i64 kNaiveBelow = 1000;
constexpr int kMaxOrderProbes = 200;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }

u64 invmod(u64 a, u64 p) {
  i64 t = 0, new_t = 1;
  i64 r = static_cast<i64>(p), new_r = static_cast<i64>(a % p);
  while (new_r != 0) {
    const i64 q = r / new_r;
    std::tie(t, new_t) = std::pair{new_t, t - q * new_t};
    std::tie(r, new_r) = std::pair{new_r, r - q * new_r};
  }
  return static_cast<u64>(t < 0 ? t + static_cast<i64>(p) : t);
}

u64 powmod(u64 b, u64 e, u64 p) {
  u64 r = 1;
  b %= p;
  while (e) {
    if (e & 1) r = mulmod(r, b, p);
    b = mulmod(b, b, p);
    e >>= 1;
  }
  return r;
}

u64 reduce(i64 v, u64 p) { return static_cast<u64>(mod(v, static_cast<i64>(p))); }

int legendre(u64 r, u64 p) {
  if (r % p == 0) return 0;
  return powmod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

struct Point {
  u64 x = 0, y = 0;
  bool inf = true;
  friend bool operator==(const Point&, const Point&) = default;
};

// y^2 = x^3 + A x + B over F_p, p >= 5
struct ShortCurve {
  u64 p, A;

  Point neg(const Point& P) const { return P.inf ? P : Point{P.x, (p - P.y) % p, false}; }

  Point add(const Point& P, const Point& Q) const {
    if (P.inf) return Q;
    if (Q.inf) return P;
    u64 lam;
    if (P.x == Q.x) {
      if ((P.y + Q.y) % p == 0) return Point{};
      const u64 num = (3 * mulmod(P.x, P.x, p) + A) % p;
      lam = mulmod(num, invmod(2 * P.y % p, p), p);
    } else {
      const u64 num = (Q.y + p - P.y) % p;
      lam = mulmod(num, invmod((Q.x + p - P.x) % p, p), p);
    }
    const u64 x3 = (mulmod(lam, lam, p) + 2 * p - P.x - Q.x) % p;
    const u64 y3 = (mulmod(lam, (P.x + p - x3) % p, p) + p - P.y) % p;
    return Point{x3, y3, false};
  }

  Point mul(u64 k, Point P) const {
    Point R;
    while (k) {
      if (k & 1) R = add(R, P);
      P = add(P, P);
      k >>= 1;
    }
    return R;
  }

  // Some m >= 1 with mP = O, searched around [lo, hi] which must contain a multiple of ord(P).
  u64 find_multiple(const Point& P, u64 lo, u64 hi) const {
    const u64 s = static_cast<u64>(std::ceil(std::sqrt(static_cast<double>(hi - lo + 1))));
    std::vector<std::pair<u64, u64>> baby;  // (x(jP), j), j = 1..s
    baby.reserve(s);
    Point jP = P;
    for (u64 j = 1; j <= s; ++j) {
      if (jP.inf) return j;
      baby.emplace_back(jP.x, j);
      jP = add(jP, P);
    }
    std::sort(baby.begin(), baby.end());
    const Point step = mul(s, P);
    Point R = mul(lo, P);
    for (u64 base = lo; base <= hi + s; base += s, R = add(R, step)) {
      if (R.inf) return base;
      auto it = std::lower_bound(baby.begin(), baby.end(), std::pair<u64, u64>{R.x, 0});
      for (; it != baby.end() && it->first == R.x; ++it) {
        const u64 j = it->second;
        // R = -jP gives base + j, R = jP gives base - j
        for (u64 m : {base + j, base > j ? base - j : 0}) {
          if (m > 0 && mul(m, P).inf) return m;
        }
      }
    }
    throw DomainError("point order search failed; Hasse interval does not contain the group order");
  }

  u64 order_from_multiple(const Point& P, u64 m) const {
    u64 rest = m;
    std::vector<u64> factors;
    for (u64 q = 2; q * q <= rest; ++q) {
      if (rest % q) continue;
      factors.push_back(q);
      while (rest % q == 0) rest /= q;
    }
    if (rest > 1) factors.push_back(rest);
    for (u64 q : factors)
      while (m % q == 0 && mul(m / q, P).inf) m /= q;
    return m;
  }
};

u64 lcm_u(u64 a, u64 b) { return a / std::gcd(a, b) * b; }

}  // namespace

i64 EllipticCurveSpec::discriminant() const {
  const __int128 B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
  const __int128 disc = -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
  if (disc > INT64_MAX || disc < INT64_MIN) throw DomainError("curve discriminant exceeds 64 bits");
  return static_cast<i64>(disc);
}

i64 ap_naive(const EllipticCurveSpec& c, i64 p) {
  if (p < 2) throw DomainError("ap_naive: p must be prime");
  const u64 up = static_cast<u64>(p);
  if (p == 2) {
    i64 count = 1;
    for (i64 x = 0; x < 2; ++x)
      for (i64 y = 0; y < 2; ++y) {
        const i64 lhs = y * y + c.a1 * x * y + c.a3 * y;
        const i64 rhs = x * x * x + c.a2 * x * x + c.a4 * x + c.a6;
        if (mod(lhs - rhs, 2) == 0) ++count;
      }
    return 3 - count;
  }
  // number of y over x is 1 + chi(4x^3 + b2 x^2 + 2 b4 x + b6)
  std::vector<std::int8_t> chi(up, -1);
  chi[0] = 0;
  for (u64 y = 1; y <= up / 2; ++y) chi[y * y % up] = 1;
  const u64 b2 = reduce(c.b2(), up), b4 = reduce(2 * c.b4(), up), b6 = reduce(c.b6(), up);
  i64 sum = 0;
  for (u64 x = 0; x < up; ++x) {
    const u64 f = ((((4 * x % up + b2) % up) * x % up + b4) % up * x % up + b6) % up;
    sum += chi[f];
  }
  return -sum;
}

i64 ap_bsgs(const EllipticCurveSpec& c, i64 p) {
  if (p < 5) throw DomainError("ap_bsgs: p >= 5 required");
  const u64 up = static_cast<u64>(p);
  const u64 A = reduce(-27 * c.c4(), up);
  const u64 B = reduce(-54 * c.c6(), up);
  if ((4 * powmod(A, 3, up) + 27 * mulmod(B, B, up)) % up == 0) throw DomainError("ap_bsgs: bad reduction");

  const u64 width = static_cast<u64>(isqrt(4 * p));  // floor(2 sqrt p)
  const u64 lo = up + 1 - width, hi = up + 1 + width;
  u64 order_lcm_E = 1, order_lcm_T = 1;
  int probes = 0;
  for (u64 x0 = 0; x0 < up && probes < kMaxOrderProbes; ++x0) {
    const u64 r = (mulmod(mulmod(x0, x0, up), x0, up) + mulmod(A, x0, up) + B) % up;
    const int chi = legendre(r, up);
    if (chi == 0) continue;
    ++probes;
    // r y^2 = x^3 + A x + B carries (x0, 1); scaling by r gives (r x0, r^2) on
    // Y^2 = X^3 + A r^2 X + B r^3, isomorphic to E when chi = 1 and to its twist when chi = -1.
    const u64 r2 = mulmod(r, r, up);
    const ShortCurve curve{up, mulmod(A, r2, up)};
    const Point P{mulmod(r, x0, up), r2, false};
    const u64 ord = curve.order_from_multiple(P, curve.find_multiple(P, lo, hi));
    if (chi == 1)
      order_lcm_E = lcm_u(order_lcm_E, ord);
    else
      order_lcm_T = lcm_u(order_lcm_T, ord);

    int matches = 0;
    u64 found = 0;
    for (u64 n = (lo + order_lcm_E - 1) / order_lcm_E * order_lcm_E; n <= hi; n += order_lcm_E) {
      if ((2 * up + 2 - n) % order_lcm_T == 0) {
        ++matches;
        found = n;
        if (matches > 1) break;
      }
    }
    if (matches == 1) return static_cast<i64>(up + 1) - static_cast<i64>(found);
  }
  return ap_naive(c, p);
}

i64 ap_point_count(const EllipticCurveSpec& curve, i64 p) {
  if (p > kPointCountCeiling)
    throw CapacityError("ap_point_count: p beyond ceiling " + std::to_string(kPointCountCeiling));
  if (!curve.has_good_reduction(p))
    throw DomainError("ap_point_count: " + curve.label + " has bad reduction at p=" + std::to_string(p) +
                      "; use the bad_ap table entry");
  const i64 a = p < kNaiveBelow ? ap_naive(curve, p) : ap_bsgs(curve, p);
  if (static_cast<double>(a) * a > 4.0 * static_cast<double>(p))
    throw DomainError("Hasse bound violated at p=" + std::to_string(p));
  return a;
}

EigenvalueTable curve_table(const EllipticCurveSpec& curve, i64 limit) {
  if (limit > kPointCountCeiling)
    throw CapacityError("curve_table: limit beyond point-count ceiling " + std::to_string(kPointCountCeiling));
  const auto primes = sieve_primes(limit).primes;
  std::vector<double> values(primes.size());
  const auto n = static_cast<std::ptrdiff_t>(primes.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      const i64 p = primes[static_cast<std::size_t>(i)];
      i64 ap;
      if (curve.conductor % p == 0) {
        const auto it = curve.bad_ap.find(p);
        if (it == curve.bad_ap.end())
          throw DataGapError(curve.label + ": no bad_ap entry for p=" + std::to_string(p));
        ap = it->second;
      } else {
        ap = ap_point_count(curve, p);
      }
      values[static_cast<std::size_t>(i)] = static_cast<double>(ap) / std::sqrt(static_cast<double>(p));
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return EigenvalueTable(
      FormInfo{curve.label, 2, curve.conductor, curve.root_number, EigenSource::EllipticPointCount}, limit, values);
}

EllipticCurveSpec parse_curve(const std::string& text, const std::string& source_name) {
  const KeyValues kv = parse_key_values(text, source_name);
  auto get = [&](const std::string& key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw IoError(source_name + ": missing key '" + key + "'");
    return it->second;
  };
  EllipticCurveSpec c;
  c.label = get("label");
  c.a1 = std::stoll(get("a1"));
  c.a2 = std::stoll(get("a2"));
  c.a3 = std::stoll(get("a3"));
  c.a4 = std::stoll(get("a4"));
  c.a6 = std::stoll(get("a6"));
  c.conductor = std::stoll(get("conductor"));
  c.torsion_order = std::stoi(get("torsion"));
  c.real_period = std::stod(get("real_period"));
  if (kv.count("imag_period")) c.imag_period = std::stod(get("imag_period"));
  c.root_number = std::stoi(get("root_number"));
  for (const auto& [key, value] : kv) {
    if (key.rfind("tamagawa_", 0) == 0) c.tamagawa[std::stoll(key.substr(9))] = std::stoi(value);
    if (key.rfind("bad_ap_", 0) == 0) c.bad_ap[std::stoll(key.substr(7))] = std::stoi(value);
  }

  const i64 disc = c.discriminant();
  if (disc == 0) throw DomainError(source_name + ": singular curve (discriminant 0)");
  i64 rest = c.conductor;
  for (i64 p = 2; p * p <= rest || rest > 1; ++p) {
    if (p * p > rest) p = rest;
    if (rest % p) continue;
    while (rest % p == 0) rest /= p;
    if (disc % p != 0) throw DomainError(source_name + ": conductor prime " + std::to_string(p) + " does not divide the discriminant");
    const auto it = c.bad_ap.find(p);
    if (it == c.bad_ap.end()) throw DataGapError(source_name + ": missing bad_ap_" + std::to_string(p));
    const i64 counted = ap_naive(c, p);
    if (counted != it->second)
      throw DomainError(source_name + ": bad_ap_" + std::to_string(p) + " disagrees with the singular-fibre count " +
                        std::to_string(counted));
  }
  if (c.root_number != 1 && c.root_number != -1) throw DomainError(source_name + ": root_number must be ±1");
  return c;
}

EllipticCurveSpec read_curve_file(const std::filesystem::path& path) {
  return parse_curve(read_file(path), path.string());
}

}  // namespace twistlab
