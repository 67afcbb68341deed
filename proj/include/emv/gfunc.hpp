#pragma once

// Evaluation of g_{a,b}(t) = (b^t - a^t)/t and its logarithmic derivatives.
//
// Everything is expressed through L = ln(b/a), the midpoint m = ln sqrt(ab)
// and the half-argument v = t*L/2:
//
//   ln g(t)    = t*m + ln L + S(v),       S(v) = ln(sinh v / v)
//   [ln g]'    = m + (L/2)*(coth v - 1/v)
//   [ln g]''   = (L^2/4)*(1/v^2 - 1/sinh^2 v)
//   [ln g]'''  = (L^3/4)*(cosh v - (sinh v/v)^3) / sinh^3 v
//
// so that every removable singularity at t = 0 is handled by a convergent
// series and the closed forms never subtract nearly equal quantities.

namespace emv {

/// Ordered base pair 0 < a < b.
class GPair {
 public:
  /// Throws DomainError unless 0 < a < b and both are finite.
  GPair(double a, double b);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }

  /// L = ln(b/a) > 0, accurate even when b/a is close to 1.
  double log_ratio() const noexcept { return log_ratio_; }

  /// m = ln sqrt(ab).
  double log_mid() const noexcept { return log_mid_; }

 private:
  double a_;
  double b_;
  double log_ratio_;
  double log_mid_;
};

enum class EvalMethod { closed_form, series_near_zero };

struct EvalResult {
  double value = 0.0;
  EvalMethod method = EvalMethod::closed_form;
  double est_abs_error = 0.0;
};

/// Below this |t*L| eval_g uses the Taylor series of (e^u - 1)/u.
inline constexpr double kGSeriesThreshold = 1e-3;

/// Inputs with |t * ln max(b, 1/a)| above this raise RangeError in eval_g.
inline constexpr double kOverflowExponent = 700.0;

/// g_{a,b}(t), with the removable value ln(b/a) at t = 0.
EvalResult eval_g_detailed(const GPair& p, double t);
double eval_g(const GPair& p, double t);

/// ln g_{a,b}(t). Never overflows; intended for convexity scans.
double log_g(const GPair& p, double t);

/// h_{a,b}(t) = [ln g]'(t), increasing from ln a to ln b; h(0) = ln sqrt(ab).
EvalResult eval_h_detailed(const GPair& p, double t);
double eval_h(const GPair& p, double t);

/// [ln g]''(t). Even in t, strictly positive, equal to L^2/12 at t = 0.
double log_g_d2(const GPair& p, double t);

/// [ln g]'''(t). Odd in t: positive for t < 0, negative for t > 0, zero at 0.
double log_g_d3(const GPair& p, double t);

/// cosh t - (sinh t / t)^3, zero at t = 0 and negative elsewhere.
/// Throws RangeError once (sinh t / t)^3 leaves the binary64 range.
double lazarevic_gap(double t);

}  // namespace emv
