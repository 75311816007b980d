#include "qedmb/wigner.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace qedmb::wigner {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

int to_twice(double j) {
  const double t = 2.0 * j;
  const long r = std::lround(t);
  if (std::abs(t - double(r)) > 1e-9)
    throw std::invalid_argument("wigner: argument is not half-integer");
  return int(r);
}

const cpp_int& factorial(int n) {
  // immutable after initialization, so returned references stay valid and
  // concurrent lookups are safe
  static const std::vector<cpp_int> table = [] {
    std::vector<cpp_int> t{1};
    for (int i = 1; i <= 256; ++i) t.push_back(t.back() * i);
    return t;
  }();
  return table.at(std::size_t(n));
}

bool triangle2(int a, int b, int c) {
  return a + b >= c && a + c >= b && b + c >= a && (a + b + c) % 2 == 0;
}

// Delta(abc) = (a+b-c)!(a-b+c)!(-a+b+c)!/(a+b+c+1)!  (twice-j arguments)
cpp_rational delta2(int a, int b, int c) {
  return cpp_rational(factorial((a + b - c) / 2) *
                          factorial((a - b + c) / 2) *
                          factorial((-a + b + c) / 2),
                      factorial((a + b + c) / 2 + 1));
}

double sqrt_rational(const cpp_rational& r) {
  const long double num = numerator(r).convert_to<long double>();
  const long double den = denominator(r).convert_to<long double>();
  return double(std::sqrt(num / den));
}

double three_j_exact(int j1, int j2, int j3, int m1, int m2, int m3) {
  if (m1 + m2 + m3 != 0) return 0.0;
  if (!triangle2(j1, j2, j3)) return 0.0;
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3) return 0.0;
  if ((j1 + m1) % 2 || (j2 + m2) % 2 || (j3 + m3) % 2) return 0.0;

  const cpp_rational pref =
      delta2(j1, j2, j3) *
      cpp_rational(factorial((j1 + m1) / 2) * factorial((j1 - m1) / 2) *
                       factorial((j2 + m2) / 2) * factorial((j2 - m2) / 2) *
                       factorial((j3 + m3) / 2) * factorial((j3 - m3) / 2),
                   1);

  const int t_min =
      std::max({0, (j2 - j3 - m1) / 2, (j1 - j3 + m2) / 2});
  const int t_max =
      std::min({(j1 + j2 - j3) / 2, (j1 - m1) / 2, (j2 + m2) / 2});
  cpp_rational sum = 0;
  for (int t = t_min; t <= t_max; ++t) {
    cpp_int den = factorial(t) * factorial((j1 + j2 - j3) / 2 - t) *
                  factorial((j1 - m1) / 2 - t) *
                  factorial((j2 + m2) / 2 - t) *
                  factorial((j3 - j2 + m1) / 2 + t) *
                  factorial((j3 - j1 - m2) / 2 + t);
    cpp_rational term(1, den);
    if (t % 2) term = -term;
    sum += term;
  }
  const int phase = ((j1 - j2 - m3) / 2) % 2 ? -1 : 1;
  return phase * sum.convert_to<double>() * sqrt_rational(pref);
}

double six_j_exact(int a, int b, int c, int d, int e, int f) {
  if (!triangle2(a, b, c) || !triangle2(a, e, f) || !triangle2(d, b, f) ||
      !triangle2(d, e, c))
    return 0.0;
  const cpp_rational pref =
      delta2(a, b, c) * delta2(a, e, f) * delta2(d, b, f) * delta2(d, e, c);
  const int t_min = std::max({(a + b + c) / 2, (a + e + f) / 2,
                              (d + b + f) / 2, (d + e + c) / 2});
  const int t_max = std::min({(a + b + d + e) / 2, (b + c + e + f) / 2,
                              (a + c + d + f) / 2});
  cpp_rational sum = 0;
  for (int t = t_min; t <= t_max; ++t) {
    cpp_int den = factorial(t - (a + b + c) / 2) *
                  factorial(t - (a + e + f) / 2) *
                  factorial(t - (d + b + f) / 2) *
                  factorial(t - (d + e + c) / 2) *
                  factorial((a + b + d + e) / 2 - t) *
                  factorial((b + c + e + f) / 2 - t) *
                  factorial((a + c + d + f) / 2 - t);
    cpp_rational term(factorial(t + 1), den);
    if (t % 2) term = -term;
    sum += term;
  }
  return sum.convert_to<double>() * sqrt_rational(pref);
}

struct Key {
  std::uint64_t a, b;
  bool operator==(const Key& o) const { return a == o.a && b == o.b; }
};
struct KeyHash {
  std::size_t operator()(const Key& k) const {
    return std::hash<std::uint64_t>()(k.a * 1099511628211ull ^ k.b);
  }
};

std::uint64_t pack4(int a, int b, int c, int d) {
  auto u = [](int x) { return std::uint64_t(std::uint16_t(x)); };
  return u(a) | u(b) << 16 | u(c) << 32 | u(d) << 48;
}

template <typename Fn>
double cached(std::unordered_map<Key, double, KeyHash>& cache,
              std::shared_mutex& mu, const Key& key, Fn&& compute) {
  {
    std::shared_lock lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const double value = compute();
  std::unique_lock lock(mu);
  cache.emplace(key, value);
  return value;
}

}  // namespace

bool triangle(double a, double b, double c) {
  return triangle2(to_twice(a), to_twice(b), to_twice(c));
}

double three_j(double j1, double j2, double j3, double m1, double m2,
               double m3) {
  static std::unordered_map<Key, double, KeyHash> cache;
  static std::shared_mutex mu;
  const int a[6] = {to_twice(j1), to_twice(j2), to_twice(j3),
                    to_twice(m1), to_twice(m2), to_twice(m3)};
  const Key key{pack4(a[0], a[1], a[2], a[3]), pack4(a[4], a[5], 0, 0)};
  return cached(cache, mu, key, [&] {
    return three_j_exact(a[0], a[1], a[2], a[3], a[4], a[5]);
  });
}

double clebsch(double j1, double m1, double j2, double m2, double j,
               double m) {
  const int phase2 = to_twice(j1) - to_twice(j2) + to_twice(m);
  const double sign = (phase2 / 2) % 2 ? -1.0 : 1.0;
  return sign * std::sqrt(2.0 * j + 1.0) * three_j(j1, j2, j, m1, m2, -m);
}

double six_j(double j1, double j2, double j3, double j4, double j5,
             double j6) {
  static std::unordered_map<Key, double, KeyHash> cache;
  static std::shared_mutex mu;
  const int a[6] = {to_twice(j1), to_twice(j2), to_twice(j3),
                    to_twice(j4), to_twice(j5), to_twice(j6)};
  const Key key{pack4(a[0], a[1], a[2], a[3]), pack4(a[4], a[5], 1, 0)};
  return cached(cache, mu, key, [&] {
    return six_j_exact(a[0], a[1], a[2], a[3], a[4], a[5]);
  });
}

double nine_j(double j1, double j2, double j3, double j4, double j5,
              double j6, double j7, double j8, double j9) {
  // sum over the intermediate x of three 6j symbols
  const int lo2 = std::max({std::abs(to_twice(j1) - to_twice(j9)),
                            std::abs(to_twice(j4) - to_twice(j8)),
                            std::abs(to_twice(j2) - to_twice(j6))});
  const int hi2 = std::min({to_twice(j1) + to_twice(j9),
                            to_twice(j4) + to_twice(j8),
                            to_twice(j2) + to_twice(j6)});
  double sum = 0.0;
  for (int x2 = lo2; x2 <= hi2; x2 += 2) {
    const double x = 0.5 * x2;
    const double sign = (x2 % 2) ? -1.0 : 1.0;  // (-1)^{2x}
    sum += sign * (x2 + 1) * six_j(j1, j4, j7, j8, j9, x) *
           six_j(j2, j5, j8, j4, x, j6) * six_j(j3, j6, j9, x, j1, j2);
  }
  return sum;
}

}  // namespace qedmb::wigner
