#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "routed/bounds.hpp"
#include "routed/io.hpp"
#include "routed/lhs_geometry.hpp"
#include "routed/lhv_models.hpp"
#include "routed/scan.hpp"
#include "routed/strategies.hpp"

namespace routed::cli {
namespace {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int parse_setting_count(const std::string& text) {
  if (text == "inf" || text == "infinity") return RoutedStats::kContinuum;
  std::size_t pos = 0;
  int n = 0;
  try {
    n = std::stoi(text, &pos);
  } catch (const std::exception&) {
    throw InputError("--n must be a positive integer or 'inf', got '" + text + "'");
  }
  if (pos != text.size() || n < 0) throw InputError("--n must be a positive integer or 'inf', got '" + text + "'");
  return n;
}

double tolerance_from_env() {
  const char* env = std::getenv("ROUTED_BELL_TOL");
  if (env == nullptr || *env == '\0') return CertifyOptions{}.tolerance;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(v >= 0.0) || !std::isfinite(v)) {
    throw InputError(std::string("ROUTED_BELL_TOL must be a non-negative number, got '") + env + "'");
  }
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to path, or to out when path is empty.
void emit_text(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << text;
  f.close();
  if (!f) throw InputError("failed writing '" + path + "'");
}

void check_format(const std::string& format) {
  if (format != "csv" && format != "json") throw InputError("--format must be csv or json");
}

struct CertifyArgs {
  double S = 0.0;
  double W = 0.0;
  double T = 0.0;
  std::string n = "1";
  std::string stats;
  std::string out;
};

struct ScanArgs {
  std::vector<int> ns{2, 4, 8};
  double eps = 0.0;
  double delta = 0.0;
  double eta_d = 1.0;
  double nu = 1.0;
  double eta_sp = 1.0;
  double zeta = 0.0;
  bool closed_form = false;
  double resolution = 1e-12;
  std::string format = "csv";
  std::string out;
};

struct EmitArgs {
  std::string kind;
  int n = 2;
  int grid = 100;
  int points = 101;
  double S = kTsirelson;
  std::string format = "csv";
  std::string out;
};

struct LhvArgs {
  std::string model;
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 7;
  int settings = 20;
  double keep = 1.0;
  double k_sigma = 4.0;
  int threads = 0;
  std::string out;
};

struct SimulateArgs {
  int n = 2;
  double eta = 1.0;
  double eta_d = 1.0;
  double nu = 1.0;
  double eta_sp = 1.0;
  double eta_lp = 1.0;
  bool table = false;
  std::string out;
};

int do_certify(const CertifyArgs& a, bool inline_given, std::ostream& out, std::ostream& err) {
  RoutedStats stats;
  if (!a.stats.empty()) {
    if (inline_given) throw InputError("use either --stats or --S/--W/--T, not both");
    stats = stats_from_json(read_file(a.stats));
  } else {
    stats.S = a.S;
    stats.Wn = a.W;
    stats.Tn = a.T;
    stats.n = parse_setting_count(a.n);
  }
  CertifyOptions opts;
  opts.tolerance = tolerance_from_env();
  const Verdict v = certify(stats, opts);
  emit_text(verdict_to_json(v), a.out, out);
  err << (v.lrq_certified ? "LRQ certified" : "compatible with SRQ") << " (bound " << v.bound_name << " = "
      << v.bound_value << ", margin " << v.margin << ")\n";
  return v.lrq_certified ? kCertified : kNotCertified;
}

int do_scan(const ScanArgs& a, bool eps_given, bool noise_given, bool zeta_given, std::ostream& out) {
  check_format(a.format);
  if (eps_given && (noise_given || zeta_given)) {
    throw InputError("give either --eps/--delta or the noise fields, not both");
  }
  if (noise_given && zeta_given) throw InputError("--zeta replaces --eta-d, --nu and --eta-sp");
  double eps = a.eps;
  double delta = a.delta;
  if (noise_given || zeta_given) {
    NoiseModel nm;
    nm.eta_d = zeta_given ? 1.0 - a.zeta : a.eta_d;
    nm.nu = zeta_given ? 1.0 - a.zeta : a.nu;
    nm.eta_sp = zeta_given ? 1.0 - a.zeta : a.eta_sp;
    const NoiseParameters p = noise_parameters(nm, a.closed_form);
    eps = p.eps;
    delta = p.delta;
  }
  const auto rows = scan_eta(a.ns, eps, delta, a.resolution);
  emit_text(a.format == "csv" ? scan_to_csv(rows) : scan_to_json(rows), a.out, out);
  return 0;
}

int do_emit(const EmitArgs& a, std::ostream& out) {
  check_format(a.format);
  const bool csv = a.format == "csv";
  std::string text;
  if (a.kind == "vertices") {
    const LhsPolytope p = lhs_vertices(a.n);
    text = csv ? polytope_to_csv(p) : polytope_to_json(p);
  } else if (a.kind == "envelope-map") {
    const auto cells = envelope_map(a.grid);
    text = csv ? envelope_to_csv(cells) : envelope_to_json(cells);
  } else if (a.kind == "linear-bounds") {
    const auto rows = linear_bounds_table(a.S, a.n, a.points);
    text = csv ? linear_bounds_to_csv(rows) : linear_bounds_to_json(rows);
  } else if (a.kind == "continuous-bound") {
    const auto rows = continuous_bound_table(a.points);
    text = csv ? curve_to_csv(rows) : curve_to_json(rows);
  } else {
    throw InputError("unknown table '" + a.kind + "'");
  }
  emit_text(text, a.out, out);
  return 0;
}

int do_lhv(const LhvArgs& a, std::ostream& out, std::ostream& err) {
  const auto kind = parse_model(a.model);
  if (!kind) throw InputError("unknown model '" + a.model + "'");
  const auto settings = default_settings(*kind, a.settings, a.seed);
  VerifyOptions opts;
  opts.k_sigma = a.k_sigma;
  opts.extra_keep = a.keep;
  opts.threads = a.threads;
  const VerifyReport r = lhv_verify(*kind, settings, a.samples, a.seed, opts);
  emit_text(report_to_json(r), a.out, out);
  if (r.insufficient_samples) err << "too few samples for a meaningful comparison\n";
  err << r.model << ": empirical eta " << r.eta_empirical << " (target " << r.eta_target << "), "
      << (r.pass ? "pass" : "fail") << "\n";
  return r.pass ? kPass : kFail;
}

int do_simulate(const SimulateArgs& a, std::ostream& out) {
  NoiseModel nm{a.eta_d, a.nu, a.eta_sp, a.eta_lp};
  const QubitStrategy s = apply_noise(ideal_strategy(a.n, a.eta), nm);
  const CorrelationTable t = correlations(s);
  emit_text(a.table ? table_to_json(t) : stats_to_json(routed_stats(t, a.n)), a.out, out);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certification and scans for routed Bell experiments", "routed_bell"};
  app.require_subcommand(1);

  CertifyArgs certify_args;
  auto* certify_cmd = app.add_subcommand("certify", "Certify long-range correlations from (S, Wn, Tn, n)");
  auto* opt_s = certify_cmd->add_option("--S", certify_args.S, "short-path CHSH value");
  auto* opt_w = certify_cmd->add_option("--W", certify_args.W, "long-path witness Wn");
  auto* opt_t = certify_cmd->add_option("--T", certify_args.T, "long-path click rate Tn");
  certify_cmd->add_option("--n", certify_args.n, "long-path setting count, or inf");
  certify_cmd->add_option("--stats", certify_args.stats, "JSON statistics or correlation table");
  certify_cmd->add_option("--out", certify_args.out, "write the verdict here instead of stdout");

  ScanArgs scan_args;
  auto* scan_cmd = app.add_subcommand("scan-eta", "Critical long-path efficiency per setting count");
  scan_cmd->add_option("--n", scan_args.ns, "setting counts")->delimiter(',');
  auto* opt_eps = scan_cmd->add_option("--eps", scan_args.eps, "CHSH deficit");
  auto* opt_delta = scan_cmd->add_option("--delta", scan_args.delta, "long-path witness deficit");
  auto* opt_eta_d = scan_cmd->add_option("--eta-d", scan_args.eta_d, "local detector efficiency");
  auto* opt_nu = scan_cmd->add_option("--nu", scan_args.nu, "source visibility");
  auto* opt_eta_sp = scan_cmd->add_option("--eta-sp", scan_args.eta_sp, "short-path transmission");
  auto* opt_zeta = scan_cmd->add_option("--zeta", scan_args.zeta, "sets eta_d = nu = eta_sp = 1 - zeta");
  scan_cmd->add_flag("--closed-form", scan_args.closed_form, "use the closed-form eps expression");
  scan_cmd->add_option("--resolution", scan_args.resolution, "bisection resolution");
  scan_cmd->add_option("--format", scan_args.format, "csv or json");
  scan_cmd->add_option("--out", scan_args.out, "output path");

  EmitArgs emit_args;
  auto* emit_cmd = app.add_subcommand("emit", "Write geometry and bound tables");
  emit_cmd->add_option("kind", emit_args.kind, "vertices, envelope-map, linear-bounds or continuous-bound")
      ->required();
  auto* opt_emit_n = emit_cmd->add_option("--n", emit_args.n, "setting count (0 for the continuum)");
  emit_cmd->add_option("--grid", emit_args.grid, "envelope-map resolution per axis");
  emit_cmd->add_option("--points", emit_args.points, "rows of one-dimensional tables");
  emit_cmd->add_option("--S", emit_args.S, "CHSH value for linear-bounds");
  emit_cmd->add_option("--format", emit_args.format, "csv or json");
  emit_cmd->add_option("--out", emit_args.out, "output path");

  LhvArgs lhv_args;
  auto* lhv_cmd = app.add_subcommand("lhv", "Monte Carlo check of a local hidden-variable model");
  lhv_cmd->add_option("model", lhv_args.model, "gisin-gisin, povm-extension, planar or planar-povm")->required();
  lhv_cmd->add_option("--samples", lhv_args.samples, "samples per setting");
  lhv_cmd->add_option("--seed", lhv_args.seed, "random seed");
  lhv_cmd->add_option("--settings", lhv_args.settings, "number of random settings");
  lhv_cmd->add_option("--keep", lhv_args.keep, "probability that a click survives extra loss");
  lhv_cmd->add_option("--k-sigma", lhv_args.k_sigma, "per-cell tolerance in binomial sigmas");
  lhv_cmd->add_option("--threads", lhv_args.threads, "worker threads (0 = all cores)");
  lhv_cmd->add_option("--out", lhv_args.out, "output path");

  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "Statistics of the noisy qubit strategy");
  sim_cmd->add_option("--n", sim_args.n, "long-path setting count");
  sim_cmd->add_option("--eta", sim_args.eta, "long-path efficiency before noise");
  sim_cmd->add_option("--eta-d", sim_args.eta_d, "local detector efficiency");
  sim_cmd->add_option("--nu", sim_args.nu, "source visibility");
  sim_cmd->add_option("--eta-sp", sim_args.eta_sp, "short-path transmission");
  sim_cmd->add_option("--eta-lp", sim_args.eta_lp, "long-path transmission");
  sim_cmd->add_flag("--table", sim_args.table, "print the full correlation table");
  sim_cmd->add_option("--out", sim_args.out, "output path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, err, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, err, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (certify_cmd->parsed()) {
      const bool inline_given = opt_s->count() + opt_w->count() + opt_t->count() > 0;
      if (!inline_given && certify_args.stats.empty()) throw InputError("certify needs --stats or --S/--W/--T");
      if (certify_args.stats.empty() && (opt_s->count() == 0 || opt_w->count() == 0 || opt_t->count() == 0)) {
        throw InputError("inline certification needs all of --S, --W and --T");
      }
      return do_certify(certify_args, inline_given, out, err);
    }
    if (scan_cmd->parsed()) {
      const bool eps_given = opt_eps->count() + opt_delta->count() > 0;
      const bool noise_given = opt_eta_d->count() + opt_nu->count() + opt_eta_sp->count() > 0;
      return do_scan(scan_args, eps_given, noise_given, opt_zeta->count() > 0, out);
    }
    if (emit_cmd->parsed()) {
      if (emit_args.kind == "vertices" && opt_emit_n->count() == 0) throw InputError("emit vertices needs --n");
      return do_emit(emit_args, out);
    }
    if (lhv_cmd->parsed()) return do_lhv(lhv_args, out, err);
    if (sim_cmd->parsed()) return do_simulate(sim_args, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  err << "error: no command given\n";
  return kInputError;
}

}  // namespace routed::cli
