#pragma once

// Numerical verification machinery: finite differences, grid scanners for
// sign / monotonicity / (log-)convexity, a bisection split locator,
// majorization pair generation and a Schur-convexity checker.
//
// scan() and schur_check() evaluate their grids with OpenMP; scan_serial()
// and schur_check_serial() are the plain reference loops. Both reduce in grid
// order, so the parallel and serial reports are identical.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emv/means.hpp"

namespace emv {

using ScalarFn = std::function<double(double)>;
using PairFn = std::function<double(double, double)>;

/// Central finite-difference estimate of f^(order)(t), order in {1, 2, 3},
/// with one Richardson step combining h and h/2 (error O(h^4)).
double central_diff(const ScalarFn& f, double t, int order, double h);

/// Default step for central_diff: c_k * max(1, |t|) with c = {1e-4, 1e-3, 5e-3}.
double default_fd_step(int order, double t);

enum class Property { sign, monotone_up, monotone_down, convex, concave, log_convex, log_concave };

std::string_view to_string(Property p);

inline constexpr double kConvexitySlack = 1e-10;
inline constexpr double kOrderSlack = 1e-12;

struct ScanSpec {
  double lo = 0.0;
  double hi = 1.0;
  int n_points = 101;
  /// k-th derivative (finite differences) of the scanned quantity; 0 scans it directly.
  int deriv_order = 0;
  Property property = Property::sign;
  /// Half-width of the excluded band around each entry of split_points.
  double exclusion_band = 0.0;
  std::vector<double> split_points;
  /// Required sign for Property::sign.
  int expected_sign = +1;
  /// Scan ln f instead of f. Implied by log_convex / log_concave.
  bool take_log = false;
  /// A sample fails when margin < -slack * max(1, |local value|) (<= when strict).
  /// Unset: kConvexitySlack for (log-)convexity, kOrderSlack otherwise.
  /// A negative slack demands a strictly positive margin.
  std::optional<double> slack;
  bool strict = false;
  bool keep_samples = false;

  /// Throws DomainError unless lo < hi, n_points >= 3,
  /// 0 <= exclusion_band < (hi - lo)/2, deriv_order in [0, 3], expected_sign = +-1.
  void validate() const;
  double abscissa(int i) const;
  bool uses_log() const;
  double effective_slack() const;
  bool excluded(double t) const;
};

struct SampleRecord {
  std::vector<double> location;
  double value = 0.0;     ///< f at the sample (raw, before any log)
  double quantity = 0.0;  ///< the differenced quantity the property is judged on
  double margin = 0.0;    ///< signed slack; negative means against the property
  bool pass = true;
};

struct PropertyReport {
  std::string name;
  std::optional<ScanSpec> spec;
  std::vector<std::string> location_names;
  std::size_t samples = 0;
  std::size_t violations = 0;
  /// Signed minimum margin over all samples (+inf when there are none).
  double worst_margin;
  std::vector<double> worst_location;
  bool passed = true;
  std::optional<std::uint64_t> seed;
  std::vector<SampleRecord> records;

  PropertyReport();

  /// Adds one judged sample; floor is the margin threshold.
  void add(std::vector<double> location, double value, double quantity, double margin,
           double floor, bool strict, bool keep);
  /// Folds another report in, prefixing its locations (and names) with the given ones.
  void absorb(const PropertyReport& other, const std::vector<double>& prefix,
              const std::vector<std::string>& prefix_names, bool keep);
};

/// Evaluates the spec's property on the grid (OpenMP over grid points).
/// Throws DomainError naming the point when a log property meets f <= 0.
PropertyReport scan(const ScalarFn& f, const ScanSpec& spec);
PropertyReport scan_serial(const ScalarFn& f, const ScanSpec& spec);

using Quantity = std::function<double(const ScalarFn&, double)>;

/// q(t) = ln f(t - h) - 2 ln f(t) + ln f(t + h).
Quantity log_second_difference(double h);

/// Sign change of quantity(f, .) on [lo, hi] by bisection to 1e-9.
/// Throws NotFoundError when the endpoint signs agree.
double split_point(const ScalarFn& f, double lo, double hi, const Quantity& quantity);

/// p = (p1 <= p2) and q = (q1 <= q2) with p majorized by q.
struct MajorizationPair {
  std::array<double, 2> p;
  std::array<double, 2> q;
};

/// p = (m - d_inner, m + d_inner), q = (m - d_outer, m + d_outer); needs 0 <= d_inner <= d_outer.
MajorizationPair make_majorization_pair(double m, double d_inner, double d_outer);

/// Equal sums and max(p) <= max(q).
bool is_majorized(const std::array<double, 2>& p, const std::array<double, 2>& q);

enum class Quadrant { nonneg, nonpos };

/// Seeded pairs inside the quadrant with |components| <= 2*scale. All values
/// sit on a dyadic grid so m +- d and the sums are exact.
std::vector<MajorizationPair> gen_majorization_pairs(std::uint64_t seed, std::size_t count,
                                                     Quadrant quadrant, double scale);

enum class SchurMode { convex, concave };

/// Concave mode asserts f(p) >= f(q), convex mode f(p) <= f(q), for every pair,
/// with slack 1e-12 * max(1, |f(q)|).
PropertyReport schur_check(const PairFn& f, const std::vector<MajorizationPair>& pairs,
                           SchurMode mode, bool keep_samples = false);
PropertyReport schur_check_serial(const PairFn& f, const std::vector<MajorizationPair>& pairs,
                                  SchurMode mode, bool keep_samples = false);

enum class OpenFamily { G, H };

struct ExploreReport {
  PropertyReport report;  ///< second differences of ln G / ln H; informational
  std::vector<double> sign_changes;
};

/// Sign structure of the second difference of ln G (or ln H) in w. No pass/fail
/// contract. Throws DomainError when the grid reaches w <= -min(x, y).
ExploreReport explore_open_problem(OpenFamily family, const MeanArgs& base, const ScanSpec& grid);

}  // namespace emv
