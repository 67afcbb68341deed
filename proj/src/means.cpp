#include "emv/means.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "emv/errors.hpp"
#include "emv/gfunc.hpp"
#include "emv/quadrature.hpp"
#include "series.hpp"

namespace emv {
namespace {

// sqrt(xy) without overflow in the product.
double geometric_mean(double x, double y) {
  if (x == y) return x;
  const double prod = x * y;
  if (std::isnormal(prod)) return std::sqrt(prod);
  return std::sqrt(x) * std::sqrt(y);
}

struct LogMean {
  double log_value;
  BranchTag branch;
  // Set for branches whose value is exact without exp (equal_points, both_zero).
  double direct_value;
  bool has_direct;
};

LogMean log_mean(const MeanArgs& m, const BranchThresholds& tol) {
  m.validate();
  const BranchTag tag = classify_branch(m, tol);

  double r = m.r;
  double s = m.s;
  double x = m.x;
  double y = m.y;
  if (x > y) std::swap(x, y);

  switch (tag) {
    case BranchTag::equal_points:
    case BranchTag::both_zero: {
      const double g = geometric_mean(x, y);
      return {std::log(g), tag, g, true};
    }
    case BranchTag::equal_exponents: {
      const GPair p(x, y);
      const double h = eval_h(p, 0.5 * (r + s));
      return {std::clamp(h, std::log(x), std::log(y)), tag, 0.0, false};
    }
    case BranchTag::r_zero:
      r = 0.0;
      break;
    case BranchTag::s_zero:
      s = 0.0;
      break;
    case BranchTag::general:
      break;
  }
  if (r > s) std::swap(r, s);

  // ln E = [ln g(s) - ln g(r)] / (s - r) with ln g(t) = t*m + ln L + S(tL/2),
  // i.e. m + (L/2) * divided difference of S at (sL/2, rL/2).
  const GPair p(x, y);
  const double L = p.log_ratio();
  const double half_L = 0.5 * L;
  const double dd = detail::log_sinhc_divided_difference(s * half_L, r * half_L, (s - r) * half_L);
  const double log_value = p.log_mid() + half_L * dd;
  return {std::clamp(log_value, std::log(x), std::log(y)), tag, 0.0, false};
}

void require_shift(const ShiftArgs& sa, const char* who) {
  if (!std::isfinite(sa.w)) throw DomainError(std::string(who) + ": w must be finite");
  const double floor = -std::min(sa.base.x, sa.base.y);
  if (!(sa.w > floor)) {
    throw DomainError(std::string(who) + ": requires w > -min(x, y) = " + std::to_string(floor));
  }
}

MeanArgs shift_exponents(const MeanArgs& b, double w) { return {b.r + w, b.s + w, b.x, b.y}; }
MeanArgs shift_points(const MeanArgs& b, double w) { return {b.r, b.s, b.x + w, b.y + w}; }
MeanArgs shift_both(const MeanArgs& b, double w) { return {b.r + w, b.s + w, b.x + w, b.y + w}; }

}  // namespace

void MeanArgs::validate() const {
  if (!(std::isfinite(r) && std::isfinite(s) && std::isfinite(x) && std::isfinite(y))) {
    throw DomainError("MeanArgs: r, s, x, y must be finite");
  }
  if (!(x > 0.0 && y > 0.0)) throw DomainError("MeanArgs: requires x > 0 and y > 0");
}

std::string_view to_string(BranchTag tag) {
  switch (tag) {
    case BranchTag::general: return "general";
    case BranchTag::r_zero: return "r_zero";
    case BranchTag::s_zero: return "s_zero";
    case BranchTag::equal_exponents: return "equal_exponents";
    case BranchTag::both_zero: return "both_zero";
    case BranchTag::equal_points: return "equal_points";
  }
  return "unknown";
}

BranchTag classify_branch(const MeanArgs& m, const BranchThresholds& tol) {
  if (std::abs(m.x - m.y) <= tol.tol_xy * std::max(m.x, m.y)) return BranchTag::equal_points;
  const bool r_small = std::abs(m.r) <= tol.tol_r;
  const bool s_small = std::abs(m.s) <= tol.tol_r;
  if (r_small && s_small) return BranchTag::both_zero;
  if (std::abs(m.r - m.s) <= tol.tol_rs * std::max({1.0, std::abs(m.r), std::abs(m.s)})) {
    return BranchTag::equal_exponents;
  }
  if (r_small) return BranchTag::r_zero;
  if (s_small) return BranchTag::s_zero;
  return BranchTag::general;
}

MeanValue eval_E_tagged(const MeanArgs& m, const BranchThresholds& tol) {
  const LogMean lm = log_mean(m, tol);
  if (lm.has_direct) return {lm.direct_value, lm.branch};
  const double lo = std::min(m.x, m.y);
  const double hi = std::max(m.x, m.y);
  return {std::clamp(std::exp(lm.log_value), lo, hi), lm.branch};
}

double eval_E(const MeanArgs& m, const BranchThresholds& tol) { return eval_E_tagged(m, tol).value; }

double log_E(const MeanArgs& m, const BranchThresholds& tol) { return log_mean(m, tol).log_value; }

double ln_E_quadrature(const MeanArgs& m, double reltol) {
  m.validate();
  if (!(reltol >= 1e-14 && reltol <= 1e-6)) {
    throw DomainError("ln_E_quadrature: reltol must lie in [1e-14, 1e-6]");
  }
  if (m.x == m.y) throw DomainError("ln_E_quadrature: requires x != y");
  const GPair p(std::min(m.x, m.y), std::max(m.x, m.y));
  if (m.r == m.s) return eval_h(p, m.r);
  const double lo = std::min(m.r, m.s);
  const double hi = std::max(m.r, m.s);
  const auto h = [&p](double u) { return eval_h(p, u); };
  try {
    return integrate_adaptive(h, lo, hi, reltol).value / (hi - lo);
  } catch (const AccuracyError& e) {
    throw AccuracyError("ln_E_quadrature: " + std::string(e.what()), e.best_estimate() / (hi - lo));
  }
}

double eval_F(const ShiftArgs& sa, const BranchThresholds& tol) {
  return eval_E(shift_exponents(sa.base, sa.w), tol);
}

double log_F(const ShiftArgs& sa, const BranchThresholds& tol) {
  return log_E(shift_exponents(sa.base, sa.w), tol);
}

double eval_G(const ShiftArgs& sa, const BranchThresholds& tol) {
  require_shift(sa, "eval_G");
  return eval_E(shift_points(sa.base, sa.w), tol);
}

double log_G(const ShiftArgs& sa, const BranchThresholds& tol) {
  require_shift(sa, "log_G");
  return log_E(shift_points(sa.base, sa.w), tol);
}

double eval_H(const ShiftArgs& sa, const BranchThresholds& tol) {
  require_shift(sa, "eval_H");
  return eval_E(shift_both(sa.base, sa.w), tol);
}

double log_H(const ShiftArgs& sa, const BranchThresholds& tol) {
  require_shift(sa, "log_H");
  return log_E(shift_both(sa.base, sa.w), tol);
}

double eval_I(double s, double t, double x) {
  if (!(std::isfinite(s) && std::isfinite(t) && std::isfinite(x))) {
    throw DomainError("eval_I: arguments must be finite");
  }
  if (s == t) throw DomainError("eval_I: requires s != t");
  const double u = x + s;
  const double v = x + t;
  if (!(u > 0.0 && v > 0.0)) throw DomainError("eval_I: requires x + s > 0 and x + t > 0");
  // ln I = -1 + (u ln u - v ln v)/(u - v) = ln lo - 1 + (1 + rho) ln(1 + rho)/rho, rho = (hi - lo)/lo
  const double lo = std::min(u, v);
  const double hi = std::max(u, v);
  const double rho = (hi - lo) / lo;
  if (rho == 0.0) return lo;
  return std::exp(std::log(lo) - 1.0 + (1.0 + rho) * (std::log1p(rho) / rho));
}

double eval_L(double s, double t, double x) {
  if (!(std::isfinite(s) && std::isfinite(t) && std::isfinite(x))) {
    throw DomainError("eval_L: arguments must be finite");
  }
  const double u = x + s;
  const double v = x + t;
  if (!(u > 0.0 && v > 0.0)) throw DomainError("eval_L: requires x + s > 0 and x + t > 0");
  if (u == v) return u;
  const double lo = std::min(u, v);
  const double hi = std::max(u, v);
  const double rho = (hi - lo) / lo;
  return lo * (rho / std::log1p(rho));
}

double log_product_F(const MeanArgs& base, double w, const BranchThresholds& tol) {
  return log_F({base, w}, tol) + log_F({base, -w}, tol);
}

double product_F(const MeanArgs& base, double w, const BranchThresholds& tol) {
  return std::exp(log_product_F(base, w, tol));
}

double remark_fn(const MeanArgs& base, double w, const BranchThresholds& tol) {
  if (!(base.s > base.r)) throw DomainError("remark_fn: requires s > r");
  const double gap = base.s - base.r;
  return (w + gap) * std::exp(gap * log_F({base, w}, tol));
}

}  // namespace emv
