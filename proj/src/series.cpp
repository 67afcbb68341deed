#include "series.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include "emv/errors.hpp"

namespace emv::detail {
namespace {

constexpr double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

constexpr double ipow(double base, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= base;
  return r;
}

// sinh(v)/v = sum_k x^k / (2k+1)!, x = v^2
constexpr std::size_t kSinhcTerms = 14;
constexpr auto kSinhc = [] {
  std::array<double, kSinhcTerms> c{};
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = 1.0 / factorial(2 * static_cast<int>(k) + 1);
  return c;
}();

// ln(sinh(v)/v) = sum_{n>=1} b_n x^n, from the log of the sinhc series:
// n b_n = n a_n - sum_{k=1}^{n-1} k b_k a_{n-k}
constexpr std::size_t kLogSinhcTerms = 24;
constexpr auto kLogSinhc = [] {
  std::array<double, kLogSinhcTerms> a{};
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = 1.0 / factorial(2 * static_cast<int>(k) + 1);
  std::array<double, kLogSinhcTerms> b{};
  for (std::size_t n = 1; n < b.size(); ++n) {
    double acc = static_cast<double>(n) * a[n];
    for (std::size_t k = 1; k < n; ++k) acc -= static_cast<double>(k) * b[k] * a[n - k];
    b[n] = acc / static_cast<double>(n);
  }
  return b;
}();

// v cosh v - sinh v = v * sum_{k>=1} 2k v^{2k} / (2k+1)!; stored per x^{k-1}
constexpr std::size_t kLangevinTerms = 14;
constexpr auto kLangevinNumerator = [] {
  std::array<double, kLangevinTerms> c{};
  for (std::size_t i = 0; i < c.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    c[i] = 2.0 * k / factorial(2 * k + 1);
  }
  return c;
}();

// (sinh v / v)^2 - 1 = v^2 * sum_{k>=2} 2^{2k-1} v^{2k-4} / (2k)!; stored per x^{k-2}
constexpr std::size_t kSqExcessTerms = 16;
constexpr auto kSqExcess = [] {
  std::array<double, kSqExcessTerms> c{};
  for (std::size_t i = 0; i < c.size(); ++i) {
    const int k = static_cast<int>(i) + 2;
    c[i] = ipow(2.0, 2 * k - 1) / factorial(2 * k);
  }
  return c;
}();

// cosh v - (sinh v / v)^3 = v^4 * sum_{k>=2} c_k v^{2k-4},
// c_k = 1/(2k)! - (3^{2k+3} - 3) / (4 (2k+3)!), using sinh^3 = (sinh 3v - 3 sinh v)/4.
// Every c_k is negative, so the sum has no cancellation.
constexpr std::size_t kGapTerms = 18;
constexpr auto kGap = [] {
  std::array<double, kGapTerms> c{};
  for (std::size_t i = 0; i < c.size(); ++i) {
    const int k = static_cast<int>(i) + 2;
    c[i] = 1.0 / factorial(2 * k) - (ipow(3.0, 2 * k + 3) - 3.0) / (4.0 * factorial(2 * k + 3));
  }
  return c;
}();

template <std::size_t N>
double horner(const std::array<double, N>& c, double x) {
  double r = 0.0;
  for (std::size_t i = N; i-- > 0;) r = r * x + c[i];
  return r;
}

// Beyond this |v| the asymptotic form of ln(sinh v / v) is used.
constexpr double kLogSinhcAsymptotic = 20.0;

}  // namespace

double sinhc(double v) {
  if (std::abs(v) <= kSeriesRadius) return horner(kSinhc, v * v);
  return std::sinh(v) / v;
}

double log_sinhc(double v) {
  const double av = std::abs(v);
  if (av <= kSeriesRadius) {
    return horner(kLogSinhc, av * av);  // kLogSinhc[0] == 0
  }
  if (av <= kLogSinhcAsymptotic) return std::log(std::sinh(av) / av);
  return av - std::log(2.0 * av) + std::log1p(-std::exp(-2.0 * av));
}

double langevin(double v) {
  if (std::abs(v) <= kSeriesRadius) {
    const double x = v * v;
    return v * horner(kLangevinNumerator, x) / horner(kSinhc, x);
  }
  return 1.0 / std::tanh(v) - 1.0 / v;
}

double inv_sq_excess(double v) {
  if (std::abs(v) <= kSeriesRadius) {
    const double sc = horner(kSinhc, v * v);
    return horner(kSqExcess, v * v) / (sc * sc);
  }
  const double sh = std::sinh(v);
  return 1.0 / (v * v) - 1.0 / (sh * sh);
}

double cosh_minus_sinhc_cubed(double v) {
  if (std::abs(v) <= kSeriesRadius) {
    const double x = v * v;
    return x * x * horner(kGap, x);
  }
  const double sc = std::sinh(v) / v;
  const double r = std::cosh(v) - sc * sc * sc;
  if (!std::isfinite(r)) throw RangeError("lazarevic_gap: (sinh t / t)^3 overflows");
  return r;
}

double gap_over_sinh_cubed(double v) {
  if (std::abs(v) <= kSeriesRadius) {
    const double x = v * v;
    const double sc = horner(kSinhc, x);
    return v * horner(kGap, x) / (sc * sc * sc);
  }
  const double sh = std::sinh(v);
  return 1.0 / (std::tanh(v) * sh * sh) - 1.0 / (v * v * v);
}

double log_sinhc_divided_difference(double v1, double v2, double dv) {
  if (dv == 0.0) return langevin(v1);

  if (std::max(std::abs(v1), std::abs(v2)) <= kSeriesRadius) {
    // (v1^{2n} - v2^{2n}) / (v1 - v2) = (v1 + v2) * sum_{j<n} x1^j x2^{n-1-j}
    const double x1 = v1 * v1;
    const double x2 = v2 * v2;
    double complete = 1.0;  // sum_{j<=n-1} x1^j x2^{n-1-j}
    double x2_pow = 1.0;
    double acc = kLogSinhc[1];
    for (std::size_t n = 2; n < kLogSinhcTerms; ++n) {
      x2_pow *= x2;
      complete = x1 * complete + x2_pow;
      acc += kLogSinhc[n] * complete;
    }
    return (v1 + v2) * acc;
  }

  if (std::abs(dv) > 0.25) return (log_sinhc(v1) - log_sinhc(v2)) / dv;

  // Both |v| > 0.75 with the same sign. Split
  //   S(v1) - S(v2) = ln(sinh v1 / sinh v2) - ln(v1 / v2)
  // and write sinh v1 - sinh v2 = 2 cosh(c) sinh(d), c = midpoint, d = dv/2.
  const double c = v2 + 0.5 * dv;
  const double d = 0.5 * dv;
  const double ac = std::abs(c);
  const double av2 = std::abs(v2);
  const double cosh_over_sinh = std::copysign(
      std::exp(ac - av2) * (1.0 + std::exp(-2.0 * ac)) / -std::expm1(-2.0 * av2), v2);
  return (std::log1p(2.0 * std::sinh(d) * cosh_over_sinh) - std::log1p(dv / v2)) / dv;
}

}  // namespace emv::detail
