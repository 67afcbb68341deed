#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "emv/errors.hpp"

namespace emv {

/// n-point Gauss-Legendre rule on [-1, 1]; nodes from Newton iteration on P_n.
class GaussLegendreRule {
 public:
  explicit GaussLegendreRule(std::size_t order);

  std::size_t order() const noexcept { return nodes_.size(); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }

  /// Integral of f over [lo, hi]; also accumulates the integral of |f| into *abs_integral.
  template <class F>
  double apply(const F& f, double lo, double hi, double* abs_integral = nullptr) const {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double sum = 0.0;
    double abs_sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const double fx = f(mid + half * nodes_[i]);
      sum += weights_[i] * fx;
      abs_sum += weights_[i] * std::abs(fx);
    }
    if (abs_integral) *abs_integral = std::abs(half) * abs_sum;
    return half * sum;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// The 10-point rule used by integrate_adaptive.
const GaussLegendreRule& default_rule();

struct QuadratureResult {
  double value = 0.0;
  double est_abs_error = 0.0;
  int panels = 0;
};

inline constexpr int kMaxQuadratureDepth = 40;
inline constexpr int kMaxQuadraturePanels = 1 << 15;

namespace detail {

template <class F>
void integrate_panel(const F& f, const GaussLegendreRule& rule, double lo, double hi,
                     double whole, double reltol, double abstol, int depth,
                     QuadratureResult& acc, bool& converged) {
  const double mid = 0.5 * (lo + hi);
  double abs_left = 0.0;
  double abs_right = 0.0;
  const double left = rule.apply(f, lo, mid, &abs_left);
  const double right = rule.apply(f, mid, hi, &abs_right);
  const double refined = left + right;
  const double diff = std::abs(refined - whole);
  if (diff <= std::max(abstol, reltol * (abs_left + abs_right)) || mid == lo || mid == hi) {
    acc.value += refined;
    acc.est_abs_error += diff;
    ++acc.panels;
    return;
  }
  if (depth >= kMaxQuadratureDepth || acc.panels >= kMaxQuadraturePanels) {
    converged = false;
    acc.value += refined;
    acc.est_abs_error += diff;
    ++acc.panels;
    return;
  }
  integrate_panel(f, rule, lo, mid, left, reltol, abstol, depth + 1, acc, converged);
  integrate_panel(f, rule, mid, hi, right, reltol, abstol, depth + 1, acc, converged);
}

}  // namespace detail

/// Adaptive bisection with a fixed Gauss-Legendre rule per panel. A panel is
/// accepted when the rule on the panel and on its two halves agree to
/// max(abstol, reltol * integral of |f| over the panel); abstol is per panel. Throws AccuracyError (with the best
/// estimate) when a panel is still unresolved at kMaxQuadratureDepth or the
/// panel budget kMaxQuadraturePanels runs out.
template <class F>
QuadratureResult integrate_adaptive(const F& f, double lo, double hi, double reltol,
                                    double abstol = 0.0,
                                    const GaussLegendreRule& rule = default_rule()) {
  QuadratureResult acc;
  if (lo == hi) return acc;
  bool converged = true;
  const double whole = rule.apply(f, lo, hi);
  detail::integrate_panel(f, rule, lo, hi, whole, reltol, abstol, 0, acc, converged);
  if (!converged) throw AccuracyError("integrate_adaptive: subdivision limit reached", acc.value);
  return acc;
}

}  // namespace emv
