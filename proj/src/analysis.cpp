#include "emv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

#include "emv/errors.hpp"
#include "emv/rng.hpp"

namespace emv {
namespace {

double stencil(const ScalarFn& f, double t, int order, double h) {
  switch (order) {
    case 1: return (f(t + h) - f(t - h)) / (2.0 * h);
    case 2: return (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h);
    case 3: return (f(t + 2.0 * h) - 2.0 * f(t + h) + 2.0 * f(t - h) - f(t - 2.0 * h)) / (2.0 * h * h * h);
    default: throw DomainError("central_diff: order must be 1, 2 or 3");
  }
}

std::string format_point(double t) {
  std::ostringstream os;
  os.precision(17);
  os << t;
  return os.str();
}

double checked_log(double v, double t) {
  if (!(v > 0.0)) {
    throw DomainError("scan: log property needs f > 0, got f(" + format_point(t) + ") = " + format_point(v));
  }
  return std::log(v);
}

// Raw function values and the differenced quantity at every grid point.
struct GridValues {
  std::vector<double> t;
  std::vector<double> raw;
  std::vector<double> quantity;
};

void evaluate_point(const ScalarFn& f, const ScanSpec& spec, std::size_t i, GridValues& g) {
  const double t = g.t[i];
  const bool use_log = spec.uses_log();
  g.raw[i] = f(t);
  if (spec.deriv_order == 0) {
    g.quantity[i] = use_log ? checked_log(g.raw[i], t) : g.raw[i];
    return;
  }
  const ScalarFn q = use_log ? ScalarFn([&f](double u) { return checked_log(f(u), u); }) : f;
  g.quantity[i] = central_diff(q, t, spec.deriv_order, default_fd_step(spec.deriv_order, t));
}

GridValues make_grid(const ScanSpec& spec) {
  const auto n = static_cast<std::size_t>(spec.n_points);
  GridValues g{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) g.t[i] = spec.abscissa(static_cast<int>(i));
  return g;
}

PropertyReport reduce(const ScanSpec& spec, const GridValues& g) {
  PropertyReport rep;
  rep.name = std::string(to_string(spec.property));
  rep.spec = spec;
  rep.location_names = {"t"};
  const double slack = spec.effective_slack();
  const auto floor_for = [slack](double scale) { return -slack * std::max(1.0, std::abs(scale)); };
  const std::size_t n = g.t.size();
  const auto& d = g.quantity;

  switch (spec.property) {
    case Property::sign:
      for (std::size_t i = 0; i < n; ++i) {
        if (spec.excluded(g.t[i])) continue;
        rep.add({g.t[i]}, g.raw[i], d[i], spec.expected_sign * d[i], floor_for(d[i]), spec.strict,
                spec.keep_samples);
      }
      break;
    case Property::monotone_up:
    case Property::monotone_down: {
      const double dir = spec.property == Property::monotone_up ? 1.0 : -1.0;
      for (std::size_t i = 1; i < n; ++i) {
        if (spec.excluded(g.t[i - 1]) || spec.excluded(g.t[i])) continue;
        const double step = d[i] - d[i - 1];
        const double scale = std::max(std::abs(d[i]), std::abs(d[i - 1]));
        rep.add({g.t[i]}, g.raw[i], step, dir * step, floor_for(scale), spec.strict, spec.keep_samples);
      }
      break;
    }
    case Property::convex:
    case Property::concave:
    case Property::log_convex:
    case Property::log_concave: {
      const bool convex = spec.property == Property::convex || spec.property == Property::log_convex;
      for (std::size_t i = 1; i + 1 < n; ++i) {
        if (spec.excluded(g.t[i])) continue;
        const double second = d[i - 1] + d[i + 1] - 2.0 * d[i];
        rep.add({g.t[i]}, g.raw[i], second, convex ? second : -second, floor_for(d[i]), spec.strict,
                spec.keep_samples);
      }
      break;
    }
  }
  return rep;
}

// Runs body(i) for i in [0, n) on all threads; rethrows the exception of the
// lowest failing index so errors are deterministic too.
template <class Body>
void parallel_for(std::size_t n, const Body& body) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string describe_pair(const MajorizationPair& pr) {
  return "p=(" + format_point(pr.p[0]) + ", " + format_point(pr.p[1]) + "), q=(" +
         format_point(pr.q[0]) + ", " + format_point(pr.q[1]) + ")";
}

[[noreturn]] void rethrow_with_pair(const std::exception_ptr& e, const MajorizationPair& pr) {
  const std::string where = "schur_check at " + describe_pair(pr) + ": ";
  try {
    std::rethrow_exception(e);
  } catch (const DomainError& ex) {
    throw DomainError(where + ex.what());
  } catch (const RangeError& ex) {
    throw RangeError(where + ex.what());
  } catch (const AccuracyError& ex) {
    throw AccuracyError(where + ex.what(), ex.best_estimate());
  } catch (const std::exception& ex) {
    throw std::runtime_error(where + ex.what());
  }
}

PropertyReport reduce_schur(const std::vector<MajorizationPair>& pairs, const std::vector<double>& fp,
                            const std::vector<double>& fq, SchurMode mode, bool keep) {
  PropertyReport rep;
  rep.name = mode == SchurMode::concave ? "schur_concave" : "schur_convex";
  rep.location_names = {"p1", "p2", "q1", "q2"};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& pr = pairs[i];
    const double margin = mode == SchurMode::concave ? fp[i] - fq[i] : fq[i] - fp[i];
    const double floor = -kOrderSlack * std::max(1.0, std::abs(fq[i]));
    rep.add({pr.p[0], pr.p[1], pr.q[0], pr.q[1]}, fp[i], fq[i], margin, floor, false, keep);
  }
  return rep;
}

}  // namespace

double central_diff(const ScalarFn& f, double t, int order, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("central_diff: h must be positive");
  if (order < 1 || order > 3) throw DomainError("central_diff: order must be 1, 2 or 3");
  const double coarse = stencil(f, t, order, h);
  const double fine = stencil(f, t, order, 0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

double default_fd_step(int order, double t) {
  static constexpr double kBase[] = {1e-4, 1e-3, 5e-3};
  if (order < 1 || order > 3) throw DomainError("default_fd_step: order must be 1, 2 or 3");
  return kBase[order - 1] * std::max(1.0, std::abs(t));
}

std::string_view to_string(Property p) {
  switch (p) {
    case Property::sign: return "sign";
    case Property::monotone_up: return "monotone_up";
    case Property::monotone_down: return "monotone_down";
    case Property::convex: return "convex";
    case Property::concave: return "concave";
    case Property::log_convex: return "log_convex";
    case Property::log_concave: return "log_concave";
  }
  return "unknown";
}

void ScanSpec::validate() const {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) throw DomainError("ScanSpec: requires lo < hi");
  if (n_points < 3) throw DomainError("ScanSpec: requires n_points >= 3");
  if (!(exclusion_band >= 0.0 && exclusion_band < 0.5 * (hi - lo))) {
    throw DomainError("ScanSpec: exclusion_band must lie in [0, (hi - lo)/2)");
  }
  if (deriv_order < 0 || deriv_order > 3) throw DomainError("ScanSpec: deriv_order must lie in [0, 3]");
  if (expected_sign != 1 && expected_sign != -1) throw DomainError("ScanSpec: expected_sign must be +1 or -1");
  if (slack && !std::isfinite(*slack)) throw DomainError("ScanSpec: slack must be finite");
}

double ScanSpec::abscissa(int i) const {
  if (i == n_points - 1) return hi;
  return lo + (hi - lo) * (static_cast<double>(i) / static_cast<double>(n_points - 1));
}

bool ScanSpec::uses_log() const {
  return take_log || property == Property::log_convex || property == Property::log_concave;
}

double ScanSpec::effective_slack() const {
  if (slack) return *slack;
  switch (property) {
    case Property::convex:
    case Property::concave:
    case Property::log_convex:
    case Property::log_concave:
      return kConvexitySlack;
    default:
      return kOrderSlack;
  }
}

bool ScanSpec::excluded(double t) const {
  return std::any_of(split_points.begin(), split_points.end(),
                     [&](double c) { return std::abs(t - c) <= exclusion_band; });
}

PropertyReport::PropertyReport() : worst_margin(std::numeric_limits<double>::infinity()) {}

void PropertyReport::add(std::vector<double> location, double value, double quantity, double margin,
                         double floor, bool strict, bool keep) {
  const bool ok = strict ? margin > floor : margin >= floor;
  if (samples == 0 || margin < worst_margin) {
    worst_margin = margin;
    worst_location = location;
  }
  ++samples;
  if (!ok) ++violations;
  passed = violations == 0;
  if (keep) records.push_back({std::move(location), value, quantity, margin, ok});
}

void PropertyReport::absorb(const PropertyReport& other, const std::vector<double>& prefix,
                            const std::vector<std::string>& prefix_names, bool keep) {
  if (location_names.empty()) {
    location_names = prefix_names;
    location_names.insert(location_names.end(), other.location_names.begin(), other.location_names.end());
  }
  const auto join = [&prefix](const std::vector<double>& loc) {
    std::vector<double> out = prefix;
    out.insert(out.end(), loc.begin(), loc.end());
    return out;
  };
  if (other.samples > 0 && (samples == 0 || other.worst_margin < worst_margin)) {
    worst_margin = other.worst_margin;
    worst_location = join(other.worst_location);
  }
  samples += other.samples;
  violations += other.violations;
  passed = violations == 0;
  if (keep) {
    for (const auto& rec : other.records) records.push_back({join(rec.location), rec.value, rec.quantity, rec.margin, rec.pass});
  }
}

PropertyReport scan(const ScalarFn& f, const ScanSpec& spec) {
  spec.validate();
  GridValues g = make_grid(spec);
  parallel_for(g.t.size(), [&](std::size_t i) { evaluate_point(f, spec, i, g); });
  return reduce(spec, g);
}

PropertyReport scan_serial(const ScalarFn& f, const ScanSpec& spec) {
  spec.validate();
  GridValues g = make_grid(spec);
  for (std::size_t i = 0; i < g.t.size(); ++i) evaluate_point(f, spec, i, g);
  return reduce(spec, g);
}

Quantity log_second_difference(double h) {
  if (!(h > 0.0)) throw DomainError("log_second_difference: h must be positive");
  return [h](const ScalarFn& f, double t) {
    return checked_log(f(t - h), t - h) - 2.0 * checked_log(f(t), t) + checked_log(f(t + h), t + h);
  };
}

double split_point(const ScalarFn& f, double lo, double hi, const Quantity& quantity) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) throw DomainError("split_point: requires lo < hi");
  double q_lo = quantity(f, lo);
  const double q_hi = quantity(f, hi);
  if (q_lo == 0.0) return lo;
  if (q_hi == 0.0) return hi;
  if (std::signbit(q_lo) == std::signbit(q_hi)) {
    throw NotFoundError("split_point: no sign change on [" + format_point(lo) + ", " + format_point(hi) + "]");
  }
  constexpr double kTolerance = 1e-9;
  for (int iter = 0; iter < 200 && hi - lo > kTolerance; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double q_mid = quantity(f, mid);
    if (q_mid == 0.0) return mid;
    if (std::signbit(q_mid) == std::signbit(q_lo)) {
      lo = mid;
      q_lo = q_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

MajorizationPair make_majorization_pair(double m, double d_inner, double d_outer) {
  if (!(std::isfinite(m) && std::isfinite(d_inner) && std::isfinite(d_outer))) {
    throw DomainError("make_majorization_pair: arguments must be finite");
  }
  if (!(0.0 <= d_inner && d_inner <= d_outer)) {
    throw DomainError("make_majorization_pair: requires 0 <= d_inner <= d_outer");
  }
  return {{m - d_inner, m + d_inner}, {m - d_outer, m + d_outer}};
}

bool is_majorized(const std::array<double, 2>& p, const std::array<double, 2>& q) {
  return p[0] + p[1] == q[0] + q[1] && std::max(p[0], p[1]) <= std::max(q[0], q[1]);
}

std::vector<MajorizationPair> gen_majorization_pairs(std::uint64_t seed, std::size_t count,
                                                     Quadrant quadrant, double scale) {
  if (count < 1) throw DomainError("gen_majorization_pairs: count must be >= 1");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("gen_majorization_pairs: scale must be positive");
  int exponent = 0;
  std::frexp(scale, &exponent);
  // 40 bits below the leading bit of scale: m +- d never needs more than 53.
  const double quantum = std::ldexp(1.0, exponent - 40);
  const auto snap = [quantum](double v) { return std::floor(v / quantum) * quantum; };

  SplitMix64 rng(seed);
  std::vector<MajorizationPair> pairs;
  pairs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double m = snap(scale * rng.uniform01());
    const double d_outer = snap(m * rng.uniform01());
    const double d_inner = snap(d_outer * rng.uniform01());
    pairs.push_back(make_majorization_pair(quadrant == Quadrant::nonneg ? m : -m, d_inner, d_outer));
  }
  return pairs;
}

PropertyReport schur_check(const PairFn& f, const std::vector<MajorizationPair>& pairs, SchurMode mode,
                           bool keep_samples) {
  std::vector<double> fp(pairs.size());
  std::vector<double> fq(pairs.size());
  std::vector<std::exception_ptr> errors(pairs.size());
  const auto count = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      fp[k] = f(pairs[k].p[0], pairs[k].p[1]);
      fq[k] = f(pairs[k].q[0], pairs[k].q[1]);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (std::size_t k = 0; k < errors.size(); ++k) {
    if (errors[k]) rethrow_with_pair(errors[k], pairs[k]);
  }
  return reduce_schur(pairs, fp, fq, mode, keep_samples);
}

PropertyReport schur_check_serial(const PairFn& f, const std::vector<MajorizationPair>& pairs,
                                  SchurMode mode, bool keep_samples) {
  std::vector<double> fp(pairs.size());
  std::vector<double> fq(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    try {
      fp[k] = f(pairs[k].p[0], pairs[k].p[1]);
      fq[k] = f(pairs[k].q[0], pairs[k].q[1]);
    } catch (...) {
      rethrow_with_pair(std::current_exception(), pairs[k]);
    }
  }
  return reduce_schur(pairs, fp, fq, mode, keep_samples);
}

ExploreReport explore_open_problem(OpenFamily family, const MeanArgs& base, const ScanSpec& grid) {
  base.validate();
  grid.validate();
  const double floor = -std::min(base.x, base.y);
  if (!(grid.lo > floor)) {
    throw DomainError("explore_open_problem: grid must satisfy w > -min(x, y) = " + format_point(floor));
  }
  ScanSpec spec = grid;
  spec.property = Property::log_convex;
  spec.deriv_order = 0;
  spec.keep_samples = true;
  const ScalarFn f = family == OpenFamily::G
                         ? ScalarFn([base](double w) { return eval_G({base, w}); })
                         : ScalarFn([base](double w) { return eval_H({base, w}); });

  ExploreReport out{scan(f, spec), {}};
  out.report.name = family == OpenFamily::G ? "open_problem_G" : "open_problem_H";
  const auto& recs = out.report.records;
  int last_sign = 0;
  double last_t = 0.0;
  for (const auto& rec : recs) {
    const int sgn = (rec.quantity > 0.0) - (rec.quantity < 0.0);
    if (sgn == 0) continue;
    if (last_sign != 0 && sgn != last_sign) out.sign_changes.push_back(0.5 * (last_t + rec.location[0]));
    last_sign = sgn;
    last_t = rec.location[0];
  }
  return out;
}

}  // namespace emv
