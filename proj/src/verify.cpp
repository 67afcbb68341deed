#include "emv/verify.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <utility>

#include "emv/csv.hpp"
#include "emv/errors.hpp"

namespace emv {
namespace {

const std::vector<std::string> kGPairNames = {"a", "b"};
const std::vector<std::string> kBaseNames = {"r", "s", "x", "y"};

std::vector<double> gpair_loc(const GPair& p) { return {p.a(), p.b()}; }
std::vector<double> base_loc(const MeanArgs& m) { return {m.r, m.s, m.x, m.y}; }

class Suite {
 public:
  Suite(std::string_view name, const SuiteOptions& opts)
      : name_(name), opts_(opts), rng_(derive_seed(opts.seed, name)) {
    result_.suite = std::string(name);
    result_.seed = opts.seed;
  }

  SplitMix64 next_draw() { return rng_.split(); }
  const SuiteOptions& opts() const { return opts_; }
  bool keep() const { return static_cast<bool>(opts_.sink); }

  ScanSpec grid(double lo, double hi, Property prop) const {
    ScanSpec s;
    s.lo = lo;
    s.hi = hi;
    s.n_points = opts_.grid_points;
    s.property = prop;
    s.keep_samples = keep();
    return s;
  }

  // Point checks: a fresh report whose samples pass when margin >= 0.
  PropertyReport points(std::vector<std::string> names) const {
    PropertyReport r;
    r.location_names = std::move(names);
    return r;
  }
  void point(PropertyReport& r, std::vector<double> loc, double value, double quantity,
             double margin) const {
    r.add(std::move(loc), value, quantity, margin, 0.0, false, keep());
  }

  void fold(std::string_view property, const PropertyReport& part, const std::vector<double>& prefix,
            const std::vector<std::string>& prefix_names) {
    PropertyReport& agg = slot(property);
    agg.absorb(part, prefix, prefix_names, false);
    if (!opts_.sink) return;
    std::vector<std::string> names = prefix_names;
    names.insert(names.end(), part.location_names.begin(), part.location_names.end());
    for (const auto& rec : part.records) {
      SampleRecord joined = rec;
      joined.location = prefix;
      joined.location.insert(joined.location.end(), rec.location.begin(), rec.location.end());
      opts_.sink(name_, property, names, joined);
    }
  }

  SuiteResult finish() && { return std::move(result_); }

 private:
  PropertyReport& slot(std::string_view property) {
    for (auto& r : result_.reports) {
      if (r.name == property) return r;
    }
    PropertyReport r;
    r.name = std::string(property);
    r.seed = opts_.seed;
    result_.reports.push_back(std::move(r));
    return result_.reports.back();
  }

  std::string name_;
  const SuiteOptions& opts_;
  SplitMix64 rng_;
  SuiteResult result_;
};

void theorem2(Suite& S) {
  const auto& o = S.opts();
  {
    // The gap function does not depend on the draw.
    ScanSpec sp = S.grid(1e-3, 30.0, Property::sign);
    sp.expected_sign = -1;
    sp.strict = true;
    sp.slack = 0.0;
    S.fold("gap_negative", scan([](double t) { return lazarevic_gap(t); }, sp), {}, {});
  }
  for (std::size_t i = 0; i < o.samples; ++i) {
    SplitMix64 d = S.next_draw();
    const GPair p = draw_gpair(d, o.min_log_ratio);
    const auto loc = gpair_loc(p);
    const double alpha = d.uniform(0.1, 5.0);

    S.fold("log_convex", scan([&p](double t) { return eval_g(p, t); }, S.grid(-40.0, 40.0, Property::log_convex)),
           loc, kGPairNames);

    const auto d2 = [&p](double t) { return log_g_d2(p, t); };
    const auto d3 = [&p](double t) { return log_g_d3(p, t); };
    ScanSpec pos = S.grid(-40.0, 40.0, Property::sign);
    pos.strict = true;
    pos.slack = 0.0;
    S.fold("d2_positive", scan(d2, pos), loc, kGPairNames);

    ScanSpec left = S.grid(-30.0, -1e-2, Property::sign);
    left.strict = true;
    left.slack = -1e-15;
    S.fold("d3_positive_left", scan(d3, left), loc, kGPairNames);
    ScanSpec right = S.grid(1e-2, 30.0, Property::sign);
    right.expected_sign = -1;
    right.strict = true;
    right.slack = -1e-15;
    S.fold("d3_negative_right", scan(d3, right), loc, kGPairNames);

    ScanSpec up = S.grid(-40.0, 40.0, Property::monotone_up);
    up.strict = true;
    up.slack = 0.0;
    S.fold("h_increasing", scan([&p](double t) { return eval_h(p, t); }, up), loc, kGPairNames);

    const double la = std::log(p.a());
    const double lb = std::log(p.b());
    ScanSpec inside = S.grid(-40.0, 40.0, Property::sign);
    inside.strict = true;
    inside.slack = 0.0;
    S.fold("h_inside_bounds",
           scan([&](double t) { const double h = eval_h(p, t); return std::min(h - la, lb - h); }, inside),
           loc, kGPairNames);

    PropertyReport lim = S.points({"t"});
    const double hp = eval_h(p, 1e4);
    const double hm = eval_h(p, -1e4);
    S.point(lim, {1e4}, hp, hp - lb, 2e-4 - std::abs(hp - lb));
    S.point(lim, {-1e4}, hm, hm - la, 2e-4 - std::abs(hm - la));
    S.fold("h_limits", lim, loc, kGPairNames);

    // d2(t + alpha) - d2(t) changes sign at t = -alpha/2.
    const double c = -0.5 * alpha;
    const auto shift = [&](double t) { return log_g_d2(p, t + alpha) - log_g_d2(p, t); };
    ScanSpec sl = S.grid(-40.0, c, Property::sign);
    sl.split_points = {c};
    sl.exclusion_band = 1e-6;
    sl.strict = true;
    sl.slack = 0.0;
    ScanSpec sr = sl;
    sr.lo = c;
    sr.hi = 40.0;
    sr.expected_sign = -1;
    const std::vector<double> aloc = {p.a(), p.b(), alpha};
    const std::vector<std::string> anames = {"a", "b", "alpha"};
    S.fold("d2_shift_left", scan(shift, sl), aloc, anames);
    S.fold("d2_shift_right", scan(shift, sr), aloc, anames);
  }
}

void theorem3(Suite& S) {
  const auto& o = S.opts();
  const BranchThresholds tol = o.thresholds;
  const std::vector<std::string> xy_names = {"x", "y"};
  for (std::size_t i = 0; i < o.samples; ++i) {
    SplitMix64 d = S.next_draw();
    const MeanArgs b = draw_base(d, o.min_log_ratio);
    const std::vector<double> xy = {b.x, b.y};
    const auto E = [&](double r, double s) { return eval_E({r, s, b.x, b.y}, tol); };
    const auto Q = [&](double r, double s) { return ln_E_quadrature({r, s, b.x, b.y}, 1e-13); };

    const auto nonneg = gen_majorization_pairs(d(), o.pairs_per_draw, Quadrant::nonneg, 10.0);
    const auto nonpos = gen_majorization_pairs(d(), o.pairs_per_draw, Quadrant::nonpos, 10.0);
    S.fold("schur_concave_nonneg", schur_check(E, nonneg, SchurMode::concave, S.keep()), xy, xy_names);
    S.fold("schur_convex_nonpos", schur_check(E, nonpos, SchurMode::convex, S.keep()), xy, xy_names);

    const std::size_t nq = std::max<std::size_t>(5, o.pairs_per_draw / 10);
    const auto qpos = gen_majorization_pairs(d(), nq, Quadrant::nonneg, 10.0);
    const auto qneg = gen_majorization_pairs(d(), nq, Quadrant::nonpos, 10.0);
    S.fold("integral_mean_schur_concave_nonneg", schur_check(Q, qpos, SchurMode::concave, S.keep()), xy,
           xy_names);
    S.fold("integral_mean_schur_convex_nonpos", schur_check(Q, qneg, SchurMode::convex, S.keep()), xy,
           xy_names);

    // Closed form against quadrature, half of the draws straddling r = s.
    PropertyReport agree = S.points({"r", "s"});
    for (int k = 0; k < 10; ++k) {
      const double r = d.uniform(-10.0, 10.0);
      double s = d.uniform(-10.0, 10.0);
      if (k % 2 == 1) {
        const double gap = std::pow(10.0, d.uniform(-12.0, -2.0));
        s = r + (d.uniform01() < 0.5 ? -gap : gap);
      }
      const MeanArgs m{r, s, b.x, b.y};
      const double closed = log_E(m, tol);
      const double quad = ln_E_quadrature(m);
      S.point(agree, {r, s}, closed, quad - closed, 1e-10 - std::abs(quad - closed));
    }
    S.fold("branch_oracle_agreement", agree, xy, xy_names);
  }
}

void theorem4(Suite& S) {
  const auto& o = S.opts();
  const BranchThresholds tol = o.thresholds;
  for (std::size_t i = 0; i < o.samples; ++i) {
    SplitMix64 d = S.next_draw();
    const MeanArgs b = draw_base(d, o.min_log_ratio);
    const auto loc = base_loc(b);
    const double w0 = -0.5 * (b.r + b.s);
    const auto lnF = [&](double w) { return log_F({b, w}, tol); };
    const auto F = [&](double w) { return eval_F({b, w}, tol); };

    ScanSpec left = S.grid(w0 - 10.0, w0, Property::convex);
    left.split_points = {w0};
    left.exclusion_band = 1e-3 * 10.0;
    ScanSpec right = left;
    right.lo = w0;
    right.hi = w0 + 10.0;
    right.property = Property::concave;
    S.fold("lnF_convex_left", scan(lnF, left), loc, kBaseNames);
    S.fold("lnF_concave_right", scan(lnF, right), loc, kBaseNames);

    // By homogeneity ln F = ln sqrt(xy) + ln F(unit base); dropping the
    // constant keeps rounding noise out of the second difference.
    const MeanArgs unit{b.r, b.s, std::sqrt(b.x / b.y), std::sqrt(b.y / b.x)};
    const auto unit_d2 = [&](const ScalarFn&, double w) {
      constexpr double h = 0.05;
      return log_F({unit, w - h}, tol) - 2.0 * log_F({unit, w}, tol) + log_F({unit, w + h}, tol);
    };
    PropertyReport split = S.points({"split"});
    const double sp = split_point(F, w0 - 3.0, w0 + 2.0, unit_d2);
    S.point(split, {sp}, sp, sp - w0, 1e-6 - std::abs(sp - w0));
    S.fold("split_point", split, loc, kBaseNames);

    PropertyReport sym = S.points({"w"});
    const int n = std::max(3, o.grid_points / 10);
    for (int k = 0; k < n; ++k) {
      const double w = w0 - 10.0 + 20.0 * k / (n - 1);
      const double mirror = -w - (b.r + b.s);
      const double q1 = central_diff(lnF, w, 1, default_fd_step(1, w));
      const double q2 = central_diff(lnF, mirror, 1, default_fd_step(1, mirror));
      S.point(sym, {w}, q1, q2 - q1, 1e-6 * std::max(std::abs(q1), std::abs(q2)) - std::abs(q1 - q2));
    }
    S.fold("log_derivative_symmetry", sym, loc, kBaseNames);
  }
}

void theorem5(Suite& S) {
  const auto& o = S.opts();
  const BranchThresholds tol = o.thresholds;
  for (std::size_t i = 0; i < o.samples; ++i) {
    SplitMix64 d = S.next_draw();
    const MeanArgs b = draw_base(d, o.min_log_ratio);
    const auto loc = base_loc(b);
    const double sum = b.r + b.s;
    const double lxy = std::log(b.x) + std::log(b.y);
    const auto lnP = [&](double w) { return log_product_F(b, w, tol); };
    const auto lnF = [&](double w) { return log_F({b, w}, tol); };

    S.fold("product_increasing_left", scan(lnP, S.grid(-10.0, -1e-2, Property::monotone_up)), loc, kBaseNames);
    S.fold("product_decreasing_right", scan(lnP, S.grid(1e-2, 10.0, Property::monotone_down)), loc, kBaseNames);

    PropertyReport even = S.points({"w"});
    PropertyReport ident = S.points({"w"});
    PropertyReport refl = S.points({"w"});
    const int n = o.grid_points;
    for (int k = 0; k < n; ++k) {
      const double w = -10.0 + 20.0 * k / (n - 1);
      const double p = lnP(w);
      const double e = std::expm1(lnP(-w) - p);
      S.point(even, {w}, p, e, 1e-12 - std::abs(e));
      const double id = std::expm1(lxy + lnF(w) - lnF(w - sum) - p);
      S.point(ident, {w}, p, id, 1e-10 - std::abs(id));
      const double rf = std::expm1(lnF(-w) + lnF(w - sum) - lxy);
      S.point(refl, {w}, p, rf, 1e-10 - std::abs(rf));
    }
    S.fold("product_even", even, loc, kBaseNames);
    S.fold("product_identity", ident, loc, kBaseNames);
    S.fold("reflection_identity", refl, loc, kBaseNames);
  }
}

void theorem6(Suite& S) {
  const auto& o = S.opts();
  const BranchThresholds tol = o.thresholds;
  for (std::size_t i = 0; i < o.samples; ++i) {
    SplitMix64 d = S.next_draw();
    const MeanArgs b = draw_base(d, o.min_log_ratio);
    const double w0 = -0.5 * (b.r + b.s);
    if (std::abs(w0) < 1e-6) continue;
    const auto f = [&](double w) { return w * log_F({b, w}, tol); };
    S.fold("w_lnF_convex", scan(f, S.grid(std::min(w0, 0.0), std::max(w0, 0.0), Property::convex)), base_loc(b),
           kBaseNames);
  }
}

void remark(Suite& S) {
  const auto& o = S.opts();
  const BranchThresholds tol = o.thresholds;
  for (std::size_t i = 0; i < o.samples; ++i) {
    SplitMix64 d = S.next_draw();
    const MeanArgs b = draw_base(d, o.min_log_ratio, true);
    const auto loc = base_loc(b);
    const auto f = [&](double w) { return remark_fn(b, w, tol); };
    S.fold("remark_increasing", scan(f, S.grid(-10.0, 10.0, Property::monotone_up)), loc, kBaseNames);
    S.fold("remark_convex", scan(f, S.grid(-10.0, 10.0, Property::convex)), loc, kBaseNames);
    S.fold("remark_log_concave", scan(f, S.grid(-0.5 * (b.s - b.r) + 1e-2, 10.0, Property::log_concave)), loc,
           kBaseNames);
  }
}

}  // namespace

bool SuiteResult::passed() const {
  return std::all_of(reports.begin(), reports.end(), [](const PropertyReport& r) { return r.passed; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"theorem2", "theorem3", "theorem4",
                                                 "theorem5", "theorem6", "remark"};
  return names;
}

bool is_suite_name(std::string_view name) {
  if (name == "all") return true;
  const auto& n = suite_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

SuiteResult run_suite(std::string_view name, const SuiteOptions& opts) {
  if (opts.grid_points < 3) throw DomainError("run_suite: grid_points must be >= 3");
  Suite S(name, opts);
  if (name == "theorem2") theorem2(S);
  else if (name == "theorem3") theorem3(S);
  else if (name == "theorem4") theorem4(S);
  else if (name == "theorem5") theorem5(S);
  else if (name == "theorem6") theorem6(S);
  else if (name == "remark") remark(S);
  else throw DomainError("run_suite: unknown suite '" + std::string(name) + "'");
  return std::move(S).finish();
}

std::vector<SuiteResult> run_suites(std::string_view name, const SuiteOptions& opts) {
  std::vector<SuiteResult> out;
  if (name == "all") {
    for (const auto& n : suite_names()) out.push_back(run_suite(n, opts));
  } else {
    out.push_back(run_suite(name, opts));
  }
  return out;
}

GPair draw_gpair(SplitMix64& rng, double min_log_ratio) {
  for (;;) {
    double a = rng.uniform(0.1, 10.0);
    double b = rng.uniform(0.1, 10.0);
    if (a > b) std::swap(a, b);
    if (std::log(b / a) >= min_log_ratio) return GPair(a, b);
  }
}

MeanArgs draw_base(SplitMix64& rng, double min_log_ratio, bool require_s_gt_r) {
  for (;;) {
    MeanArgs m;
    m.r = rng.uniform(-10.0, 10.0);
    m.s = rng.uniform(-10.0, 10.0);
    m.x = rng.uniform(0.1, 10.0);
    m.y = rng.uniform(0.1, 10.0);
    if (std::abs(std::log(m.y / m.x)) < min_log_ratio) continue;
    if (require_s_gt_r) {
      if (m.r == m.s) continue;
      if (m.r > m.s) std::swap(m.r, m.s);
    }
    return m;
  }
}

std::string format_location(const std::vector<std::string>& names, const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ' ';
    out += i < names.size() ? names[i] : "v" + std::to_string(i);
    out += '=';
    out += format_sci(values[i]);
  }
  return out;
}

void write_report_lines(std::ostream& out, const SuiteResult& result) {
  for (const auto& r : result.reports) {
    out << result.suite << ' ' << r.name << ' ' << (r.passed ? "PASS" : "FAIL") << " samples=" << r.samples
        << " violations=" << r.violations << " worst_margin=" << format_sci(r.worst_margin);
    if (!r.worst_location.empty()) out << " at [" << format_location(r.location_names, r.worst_location) << ']';
    out << " seed=" << result.seed << '\n';
  }
}

}  // namespace emv
