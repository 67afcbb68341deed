#include "emv/gfunc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "emv/errors.hpp"
#include "series.hpp"

namespace emv {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// (e^u - 1)/u
double expm1_over(double u) {
  if (std::abs(u) < kGSeriesThreshold) {
    return 1.0 + u * (1.0 / 2 + u * (1.0 / 6 + u * (1.0 / 24 + u * (1.0 / 120 + u / 720))));
  }
  return std::expm1(u) / u;
}

void require_finite(double t, const char* who) {
  if (!std::isfinite(t)) throw DomainError(std::string(who) + ": t must be finite");
}

}  // namespace

GPair::GPair(double a, double b) : a_(a), b_(b) {
  if (!(std::isfinite(a) && std::isfinite(b))) throw DomainError("GPair: a and b must be finite");
  if (!(a > 0.0)) throw DomainError("GPair: a must be positive");
  if (!(a < b)) throw DomainError("GPair: requires a < b");
  // b - a is exact when b <= 2a, so log1p keeps full relative accuracy for close bases.
  log_ratio_ = (b <= 2.0 * a) ? std::log1p((b - a) / a) : std::log(b) - std::log(a);
  log_mid_ = 0.5 * (std::log(a) + std::log(b));
  if (!(log_ratio_ > 0.0) || !std::isfinite(log_ratio_)) {
    throw DomainError("GPair: ln(b/a) is not a finite positive number");
  }
}

EvalResult eval_g_detailed(const GPair& p, double t) {
  require_finite(t, "eval_g");
  const double log_a = std::log(p.a());
  const double widest = std::max(std::log(p.b()), -log_a);
  if (std::abs(t * widest) > kOverflowExponent) {
    throw RangeError("eval_g: |t * ln max(b, 1/a)| exceeds " + std::to_string(kOverflowExponent));
  }
  const double L = p.log_ratio();
  const double u = t * L;
  EvalResult r;
  r.method = std::abs(u) < kGSeriesThreshold ? EvalMethod::series_near_zero : EvalMethod::closed_form;
  r.value = std::exp(t * log_a) * L * expm1_over(u);
  r.est_abs_error = 8.0 * kEps * (1.0 + std::abs(t * log_a) + std::abs(u)) * r.value;
  return r;
}

double eval_g(const GPair& p, double t) { return eval_g_detailed(p, t).value; }

double log_g(const GPair& p, double t) {
  require_finite(t, "log_g");
  const double L = p.log_ratio();
  return t * p.log_mid() + std::log(L) + detail::log_sinhc(0.5 * t * L);
}

EvalResult eval_h_detailed(const GPair& p, double t) {
  require_finite(t, "eval_h");
  const double L = p.log_ratio();
  const double v = 0.5 * t * L;
  EvalResult r;
  r.method = std::abs(v) <= detail::kSeriesRadius ? EvalMethod::series_near_zero
                                                  : EvalMethod::closed_form;
  r.value = p.log_mid() + 0.5 * L * detail::langevin(v);
  r.est_abs_error = 8.0 * kEps * (std::abs(p.log_mid()) + L);
  return r;
}

double eval_h(const GPair& p, double t) { return eval_h_detailed(p, t).value; }

double log_g_d2(const GPair& p, double t) {
  require_finite(t, "log_g_d2");
  const double L = p.log_ratio();
  return 0.25 * L * L * detail::inv_sq_excess(0.5 * t * L);
}

double log_g_d3(const GPair& p, double t) {
  require_finite(t, "log_g_d3");
  if (t == 0.0) return 0.0;
  const double L = p.log_ratio();
  return 0.25 * L * L * L * detail::gap_over_sinh_cubed(0.5 * t * L);
}

double lazarevic_gap(double t) {
  require_finite(t, "lazarevic_gap");
  return detail::cosh_minus_sinhc_cubed(t);
}

}  // namespace emv
