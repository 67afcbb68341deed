#pragma once

// Hyperbolic kernels shared by gfunc and means. All take the half argument
// v = t*L/2 and switch to convergent power series in v^2 for |v| <= 1.

namespace emv::detail {

inline constexpr double kSeriesRadius = 1.0;

/// sinh(v)/v
double sinhc(double v);

/// S(v) = ln(sinh(v)/v), even, S(v) ~ v^2/6 near 0 and ~ |v| - ln(2|v|) far out.
double log_sinhc(double v);

/// S'(v) = coth(v) - 1/v (the Langevin function), odd, in (-1, 1).
double langevin(double v);

/// S''(v) = 1/v^2 - 1/sinh^2(v), even, 1/3 at v = 0.
double inv_sq_excess(double v);

/// cosh(v) - (sinh(v)/v)^3. Throws RangeError when the cube overflows.
double cosh_minus_sinhc_cubed(double v);

/// (cosh(v) - (sinh(v)/v)^3) / sinh^3(v), odd, ~ -v/15 near 0.
double gap_over_sinh_cubed(double v);

/// (S(v1) - S(v2)) / (v1 - v2), with dv = v1 - v2 supplied by the caller
/// (it is usually known more accurately than the rounded difference).
/// Reduces to langevin(v1) when dv == 0.
double log_sinhc_divided_difference(double v1, double v2, double dv);

}  // namespace emv::detail
