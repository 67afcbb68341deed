#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "emv/analysis.hpp"
#include "emv/csv.hpp"
#include "emv/errors.hpp"
#include "emv/gfunc.hpp"
#include "emv/means.hpp"
#include "emv/verify.hpp"

namespace emv::cli {
namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Output target: a file when a path is given, otherwise the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*file_) throw IoError("cannot open '" + path + "' for writing");
    stream_ = file_.get();
    path_ = path;
  }
  std::ostream& os() { return *stream_; }
  bool is_file() const { return file_ != nullptr; }
  void close() {
    stream_->flush();
    if (!*stream_) throw IoError("write failed" + (path_.empty() ? std::string() : " for '" + path_ + "'"));
    if (file_) file_->close();
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
  std::string path_;
};

const std::map<std::string, Property> kProperties = {
    {"sign", Property::sign},         {"monotone_up", Property::monotone_up},
    {"monotone_down", Property::monotone_down}, {"convex", Property::convex},
    {"concave", Property::concave},   {"log_convex", Property::log_convex},
    {"log_concave", Property::log_concave}};

std::string sign_char(double q) { return q > 0.0 ? "+" : (q < 0.0 ? "-" : "0"); }

void write_scan_csv(std::ostream& os, const PropertyReport& rep) {
  CsvWriter w(os);
  w.row({"abscissa", "value", "quantity", "sign"});
  for (const auto& rec : rep.records) {
    w.row({format_sci(rec.location.empty() ? 0.0 : rec.location.back()), format_sci(rec.value),
           format_sci(rec.quantity), sign_char(rec.quantity)});
  }
}

struct MeanFlags {
  double r = 0.0, s = 1.0, x = 1.0, y = 2.0;
  void add(CLI::App* app) {
    app->add_option("--r", r, "first exponent")->capture_default_str();
    app->add_option("--s", s, "second exponent")->capture_default_str();
    app->add_option("--x", x, "first point (> 0)")->capture_default_str();
    app->add_option("--y", y, "second point (> 0)")->capture_default_str();
  }
  MeanArgs args() const { return {r, s, x, y}; }
};

struct GridFlags {
  double lo = -5.0, hi = 5.0;
  int n = 101;
  double band = 0.0;
  std::vector<double> split;
  void add(CLI::App* app) {
    app->add_option("--lo", lo, "grid start")->capture_default_str();
    app->add_option("--hi", hi, "grid end")->capture_default_str();
    app->add_option("--n", n, "grid points (>= 3)")->capture_default_str();
    app->add_option("--band", band, "half-width of the band excluded around each split point");
    app->add_option("--split", split, "split points (repeatable)");
  }
  ScanSpec spec() const {
    if (!(lo < hi)) throw UsageError("grid requires --lo < --hi");
    if (n < 3) throw UsageError("grid requires --n >= 3");
    ScanSpec sp;
    sp.lo = lo;
    sp.hi = hi;
    sp.n_points = n;
    sp.exclusion_band = band;
    sp.split_points = split;
    return sp;
  }
};

int run(CLI::App& app, int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  app.require_subcommand(1);

  // eval
  MeanFlags ev;
  std::string ev_method = "direct", ev_format = "plain", ev_out;
  double ev_reltol = 1e-12;
  auto* eval = app.add_subcommand("eval", "Evaluate E(r, s; x, y) with its branch tag");
  ev.add(eval);
  eval->add_option("--method", ev_method)->check(CLI::IsMember({"direct", "quadrature"}))->capture_default_str();
  eval->add_option("--reltol", ev_reltol, "quadrature tolerance")->capture_default_str();
  eval->add_option("--format", ev_format)->check(CLI::IsMember({"plain", "csv"}))->capture_default_str();
  eval->add_option("--out", ev_out, "output file (default stdout)");

  // g
  double ga = 1.0, gb = std::exp(1.0), gt = 0.0;
  std::string gq = "g";
  auto* gcmd = app.add_subcommand("g", "Evaluate g_{a,b}(t) or one of its log-derivatives");
  gcmd->add_option("--a", ga)->capture_default_str();
  gcmd->add_option("--b", gb)->capture_default_str();
  gcmd->add_option("--t", gt)->capture_default_str();
  gcmd->add_option("--quantity", gq)
      ->check(CLI::IsMember({"g", "log_g", "h", "d2", "d3", "gap"}))
      ->capture_default_str();

  // scan
  std::string sc_fn = "g", sc_out;
  double sc_a = 1.0, sc_b = std::exp(1.0);
  MeanFlags sc_m;
  GridFlags sc_grid;
  int sc_order = 0, sc_sign = 1;
  bool sc_log = false;
  std::optional<std::string> sc_property;
  auto* scan_cmd = app.add_subcommand("scan", "Scan a function on a grid and write CSV");
  scan_cmd->add_option("--fn", sc_fn)
      ->check(CLI::IsMember({"g", "h", "d2", "d3", "gap", "F", "G", "H", "product", "remark"}))
      ->capture_default_str();
  scan_cmd->add_option("--a", sc_a)->capture_default_str();
  scan_cmd->add_option("--b", sc_b)->capture_default_str();
  sc_m.add(scan_cmd);
  sc_grid.add(scan_cmd);
  scan_cmd->add_option("--order", sc_order, "finite-difference derivative order 0..3")->check(CLI::Range(0, 3));
  scan_cmd->add_flag("--log", sc_log, "scan the logarithm of the function");
  scan_cmd->add_option("--property", sc_property, "property to judge; exit 1 when violated")
      ->check(CLI::IsMember({"sign", "monotone_up", "monotone_down", "convex", "concave", "log_convex",
                             "log_concave"}));
  scan_cmd->add_option("--sign", sc_sign, "expected sign for --property sign")->check(CLI::IsMember({-1, 1}));
  scan_cmd->add_option("--out", sc_out, "CSV file (default stdout)");

  // verify
  std::string vf_suite = "all", vf_format = "plain", vf_out;
  std::uint64_t vf_seed = 42;
  std::size_t vf_samples = 100, vf_pairs = 100;
  int vf_grid = 401;
  double vf_tol_rs = BranchThresholds{}.tol_rs;
  auto* verify = app.add_subcommand("verify", "Run seeded property suites");
  verify->add_option("--suite", vf_suite)
      ->check(CLI::IsMember({"all", "theorem2", "theorem3", "theorem4", "theorem5", "theorem6", "remark"}))
      ->capture_default_str();
  verify->add_option("--seed", vf_seed)->envname("EMV_SEED")->capture_default_str();
  verify->add_option("--samples", vf_samples, "random draws per suite")->check(CLI::PositiveNumber)->capture_default_str();
  verify->add_option("--grid", vf_grid, "points per scan grid")->check(CLI::Range(3, 1000000))->capture_default_str();
  verify->add_option("--pairs", vf_pairs, "majorization pairs per draw")->check(CLI::PositiveNumber)->capture_default_str();
  verify->add_option("--format", vf_format)->check(CLI::IsMember({"plain", "csv"}))->capture_default_str();
  verify->add_option("--out", vf_out, "output file (default stdout)");
  verify->add_option("--tol-rs", vf_tol_rs, "equal-exponent branch threshold")->check(CLI::NonNegativeNumber);

  // explore
  std::string ex_family = "G", ex_out;
  MeanFlags ex_m;
  GridFlags ex_grid;
  ex_m.r = 0.0;
  ex_grid.lo = 0.0;
  ex_grid.hi = 10.0;
  auto* explore = app.add_subcommand("explore", "Sign structure of the second difference of ln G or ln H");
  explore->add_option("--family", ex_family)->check(CLI::IsMember({"G", "H"}))->capture_default_str();
  ex_m.add(explore);
  ex_grid.add(explore);
  explore->add_option("--out", ex_out, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  if (*eval) {
    const MeanArgs m = ev.args();
    double value = 0.0;
    BranchTag tag = classify_branch(m);
    if (ev_method == "direct") {
      const MeanValue mv = eval_E_tagged(m);
      value = mv.value;
      tag = mv.branch;
    } else {
      m.validate();
      value = std::exp(ln_E_quadrature(m, ev_reltol));
    }
    Sink sink(ev_out, out);
    if (ev_format == "csv") {
      CsvWriter w(sink.os());
      w.row({"value", "branch", "method"});
      w.row({format_sci(value), std::string(to_string(tag)), ev_method});
    } else {
      sink.os() << format_g17(value) << ' ' << to_string(tag) << '\n';
    }
    sink.close();
    return kOk;
  }

  if (*gcmd) {
    if (gq == "gap") {
      out << format_g17(lazarevic_gap(gt)) << '\n';
      return kOk;
    }
    const GPair p(ga, gb);
    if (gq == "g") {
      const EvalResult r = eval_g_detailed(p, gt);
      out << format_g17(r.value) << ' '
          << (r.method == EvalMethod::closed_form ? "closed_form" : "series_near_zero") << '\n';
    } else if (gq == "log_g") {
      out << format_g17(log_g(p, gt)) << '\n';
    } else if (gq == "h") {
      out << format_g17(eval_h(p, gt)) << '\n';
    } else if (gq == "d2") {
      out << format_g17(log_g_d2(p, gt)) << '\n';
    } else {
      out << format_g17(log_g_d3(p, gt)) << '\n';
    }
    return kOk;
  }

  if (*scan_cmd) {
    ScanSpec sp = sc_grid.spec();
    sp.deriv_order = sc_order;
    sp.take_log = sc_log;
    sp.expected_sign = sc_sign;
    sp.property = sc_property ? kProperties.at(*sc_property) : Property::sign;
    sp.keep_samples = true;
    try {
      sp.validate();
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
    ScalarFn f;
    const MeanArgs m = sc_m.args();
    if (sc_fn == "gap") {
      f = [](double t) { return lazarevic_gap(t); };
    } else if (sc_fn == "g" || sc_fn == "h" || sc_fn == "d2" || sc_fn == "d3") {
      const GPair p(sc_a, sc_b);
      if (sc_fn == "g") f = [p](double t) { return eval_g(p, t); };
      if (sc_fn == "h") f = [p](double t) { return eval_h(p, t); };
      if (sc_fn == "d2") f = [p](double t) { return log_g_d2(p, t); };
      if (sc_fn == "d3") f = [p](double t) { return log_g_d3(p, t); };
    } else {
      m.validate();
      if (sc_fn == "F") f = [m](double w) { return eval_F({m, w}); };
      if (sc_fn == "G") f = [m](double w) { return eval_G({m, w}); };
      if (sc_fn == "H") f = [m](double w) { return eval_H({m, w}); };
      if (sc_fn == "product") f = [m](double w) { return product_F(m, w); };
      if (sc_fn == "remark") f = [m](double w) { return remark_fn(m, w); };
    }
    const PropertyReport rep = scan(f, sp);
    Sink sink(sc_out, out);
    write_scan_csv(sink.os(), rep);
    sink.close();
    if (sc_property && !rep.passed) {
      err << "scan: " << to_string(sp.property) << " violated at " << rep.violations << " of " << rep.samples
          << " samples, worst margin " << format_sci(rep.worst_margin) << '\n';
      return kViolation;
    }
    return kOk;
  }

  if (*verify) {
    SuiteOptions opts;
    opts.seed = vf_seed;
    opts.samples = vf_samples;
    opts.grid_points = vf_grid;
    opts.pairs_per_draw = vf_pairs;
    opts.thresholds.tol_rs = vf_tol_rs;
    Sink sink(vf_out, out);
    std::unique_ptr<CsvWriter> csv;
    if (vf_format == "csv") {
      csv = std::make_unique<CsvWriter>(sink.os());
      csv->row({"suite", "property", "location", "margin", "pass"});
      opts.sink = [&csv](std::string_view suite, std::string_view property, const std::vector<std::string>& names,
                         const SampleRecord& rec) {
        csv->row({suite, property, format_location(names, rec.location), format_sci(rec.margin),
                  rec.pass ? "true" : "false"});
      };
    }
    // Summary lines go to the report stream unless that stream carries CSV.
    std::ostream& lines = (csv && !sink.is_file()) ? err : (csv ? out : sink.os());
    bool all_passed = true;
    for (const auto& name : (vf_suite == "all" ? suite_names() : std::vector<std::string>{vf_suite})) {
      const SuiteResult res = run_suite(name, opts);
      write_report_lines(lines, res);
      all_passed = all_passed && res.passed();
    }
    sink.close();
    return all_passed ? kOk : kViolation;
  }

  if (*explore) {
    ScanSpec sp = ex_grid.spec();
    try {
      sp.validate();
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
    const ExploreReport rep = explore_open_problem(ex_family == "G" ? OpenFamily::G : OpenFamily::H, ex_m.args(), sp);
    Sink sink(ex_out, out);
    write_scan_csv(sink.os(), rep.report);
    sink.close();
    std::ostream& info = sink.is_file() ? out : err;
    info << "sign_changes:";
    for (const double w : rep.sign_changes) info << ' ' << format_sci(w);
    info << '\n';
    return kOk;
  }
  return kUsage;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Extended mean values: evaluation, scans and property verification", "emv"};
  try {
    return run(app, argc, argv, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return kUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kDomain;
  } catch (const RangeError& e) {
    err << "range error: " << e.what() << '\n';
    return kDomain;
  } catch (const AccuracyError& e) {
    err << "accuracy error: " << e.what() << '\n';
    return kDomain;
  } catch (const NotFoundError& e) {
    err << "not found: " << e.what() << '\n';
    return kDomain;
  }
}

}  // namespace emv::cli
