#pragma once

#include <string_view>

namespace emv {

/// Parameters of the extended mean E(r, s; x, y).
struct MeanArgs {
  double r = 0.0;
  double s = 0.0;
  double x = 1.0;
  double y = 1.0;

  /// Throws DomainError unless all fields are finite and x, y > 0.
  void validate() const;
};

/// Which definitional case of E an evaluation used.
enum class BranchTag { general, r_zero, s_zero, equal_exponents, both_zero, equal_points };

std::string_view to_string(BranchTag tag);

/// Degeneracy thresholds for classify_branch.
struct BranchThresholds {
  double tol_rs = 1e-7;   ///< |r - s| <= tol_rs * max(1, |r|, |s|)
  double tol_r = 1e-12;   ///< |r| <= tol_r counts as r = 0
  double tol_xy = 1e-12;  ///< |x - y| <= tol_xy * max(x, y)
};

/// Priority: equal_points, both_zero, equal_exponents, r_zero / s_zero, general.
BranchTag classify_branch(const MeanArgs& m, const BranchThresholds& tol = {});

struct MeanValue {
  double value = 0.0;
  BranchTag branch = BranchTag::general;
};

/// E(r, s; x, y). Symmetric in (r, s) and in (x, y), homogeneous of degree
/// one in (x, y), and always inside [min(x, y), max(x, y)].
MeanValue eval_E_tagged(const MeanArgs& m, const BranchThresholds& tol = {});
double eval_E(const MeanArgs& m, const BranchThresholds& tol = {});

/// ln E(r, s; x, y), without the exp/log round trip.
double log_E(const MeanArgs& m, const BranchThresholds& tol = {});

/// ln E as the average of h_{x,y} over [r, s] by adaptive Gauss-Legendre
/// quadrature (h_{x,y}(r) when r = s). Independent of the closed-form route;
/// requires x != y and reltol in [1e-14, 1e-6].
double ln_E_quadrature(const MeanArgs& m, double reltol = 1e-12);

/// Arguments of the shifted families F, G, H.
struct ShiftArgs {
  MeanArgs base;
  double w = 0.0;
};

/// F(w) = E(r + w, s + w; x, y); w unrestricted.
double eval_F(const ShiftArgs& sa, const BranchThresholds& tol = {});
double log_F(const ShiftArgs& sa, const BranchThresholds& tol = {});

/// G(w) = E(r, s; x + w, y + w); requires w > -min(x, y).
double eval_G(const ShiftArgs& sa, const BranchThresholds& tol = {});
double log_G(const ShiftArgs& sa, const BranchThresholds& tol = {});

/// H(w) = E(r + w, s + w; x + w, y + w); requires w > -min(x, y).
double eval_H(const ShiftArgs& sa, const BranchThresholds& tol = {});
double log_H(const ShiftArgs& sa, const BranchThresholds& tol = {});

/// (1/e) [(x+s)^{x+s} / (x+t)^{x+t}]^{1/(s-t)}, the identric mean of x+s and x+t.
double eval_I(double s, double t, double x);

/// Logarithmic mean of x+s and x+t.
double eval_L(double s, double t, double x);

/// F(w) F(-w); even in w and maximal at w = 0.
double product_F(const MeanArgs& base, double w, const BranchThresholds& tol = {});
double log_product_F(const MeanArgs& base, double w, const BranchThresholds& tol = {});

/// (w + s - r) [F(w)]^{s-r} for s > r. Negative when w < -(s - r).
double remark_fn(const MeanArgs& base, double w, const BranchThresholds& tol = {});

}  // namespace emv
