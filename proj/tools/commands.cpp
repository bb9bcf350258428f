#include "cli.hpp"

#include "knead/kneading.hpp"
#include "knead/pressure.hpp"
#include "knead/semiconj.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

namespace knead::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string num(double x) {
  std::ostringstream s;
  s << std::setprecision(12) << x;
  return s.str();
}

template <class T>
std::string str(const T& x) {
  return ScalarTraits<T>::str(x);
}

struct Options {
  std::string config;
  std::vector<std::string> params;
  std::optional<std::size_t> N, N_id, depth_cap;
  std::optional<std::string> arithmetic;
  std::optional<double> tol;
  std::string out;
  std::uint64_t seed = 1;
  bool json = false;
  std::optional<double> t;
  bool critical = false;
  std::size_t depth = 4;
  std::size_t samples = 1000;
  std::size_t terms = 8;
  std::size_t grid = 200;
};

class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  void info(const std::string& key, const std::string& value) { info_.emplace_back(key, value); }
  void check(const std::string& name, double value, double tol) {
    checks_.push_back({name, value, tol, std::isfinite(value) && value <= tol, false});
  }
  void flag(const std::string& name, bool ok) { checks_.push_back({name, 0, 0, ok, true}); }
  void warn(const std::string& msg) { warnings_.push_back(msg); }
  void file(const std::string& path) { files_.push_back(path); }
  bool ok() const {
    for (const auto& c : checks_) {
      if (!c.pass) return false;
    }
    return true;
  }

  void print(std::ostream& out, bool json, const std::string& system) const {
    if (json) {
      Json j;
      j["command"] = command_;
      j["system"] = system;
      Json info = Json::object();
      for (const auto& [k, v] : info_) info[k] = v;
      j["info"] = info;
      j["checks"] = Json::array();
      for (const auto& c : checks_) {
        if (c.boolean) {
          j["checks"].push_back({{"name", c.name}, {"pass", c.pass}});
        } else {
          j["checks"].push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tol},
                                 {"pass", c.pass}});
        }
      }
      j["warnings"] = warnings_;
      j["files"] = files_;
      j["ok"] = ok();
      out << j.dump(2) << "\n";
      return;
    }
    out << command_ << ": " << system << "\n";
    for (const auto& [k, v] : info_) out << "  " << k << ": " << v << "\n";
    for (const auto& c : checks_) {
      out << "  check " << c.name << ": ";
      if (!c.boolean) out << num(c.value) << " (tolerance " << num(c.tol) << ") ";
      out << (c.pass ? "PASS" : "FAIL") << "\n";
    }
    for (const auto& w : warnings_) out << "  warning: " << w << "\n";
    for (const auto& f : files_) out << "  wrote " << f << "\n";
    out << "verdict: " << (ok() ? "PASS" : "FAIL") << "\n";
  }

 private:
  struct Check {
    std::string name;
    double value;
    double tol;
    bool pass;
    bool boolean;
  };
  std::string command_;
  std::vector<std::pair<std::string, std::string>> info_;
  std::vector<Check> checks_;
  std::vector<std::string> warnings_;
  std::vector<std::string> files_;
};

// CSV with a versioned schema line ahead of the column header.
class Csv {
 public:
  Csv(Report& report, const std::filesystem::path& dir, const std::string& name,
      const std::string& schema, const std::string& header) {
    std::filesystem::create_directories(dir);
    const auto path = dir / name;
    out_.open(path);
    if (!out_) throw Error("cannot write " + path.string());
    out_ << "# knead-csv v1 " << schema << "\n" << header << "\n";
    report.file(path.string());
  }
  template <class... Cols>
  void row(const Cols&... cols) {
    std::size_t n = 0;
    ((out_ << (n++ ? "," : "") << cols), ...);
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

template <class T>
struct Context {
  const RunConfig& cfg;
  const WeightedSystem<T>& sys;
  const Options& opt;
  Report& report;

  static constexpr bool exact = ScalarTraits<T>::exact;
  double id_tol() const { return exact ? 0.0 : cfg.identity_tol; }
  PressureOptions pressure_options() const {
    PressureOptions p;
    p.N = cfg.N;
    p.tol = cfg.tol;
    p.caps = cfg.caps;
    return p;
  }
  std::filesystem::path out_dir(const std::string& fallback = "") const {
    if (!opt.out.empty()) return opt.out;
    if (!cfg.output_dir.empty()) return cfg.output_dir;
    return fallback;
  }
  // Grid points k/grid across [a, b], exact in rational mode.
  std::vector<T> grid() const {
    std::vector<T> xs;
    for (std::size_t k = 0; k <= opt.grid; ++k) {
      xs.push_back(sys.a() + (sys.b() - sys.a()) * T(long(k)) / T(long(opt.grid)));
    }
    return xs;
  }
  double require_t() const {
    if (!opt.t) throw ConfigError("--t", "this command needs a parameter value t");
    return *opt.t;
  }
};

template <class T>
void identity_at_zero(Context<T>& ctx) {
  const auto R = kneading_matrix(ctx.sys, 0);
  const auto c0 = R.coefficient(0);
  double worst = 0;
  for (std::size_t j = 0; j < R.dim(); ++j) {
    for (std::size_t k = 0; k < R.dim(); ++k) {
      worst = std::max(worst, std::fabs(to_double(c0[j * R.dim() + k]) - (j == k ? 1.0 : 0.0)));
    }
  }
  ctx.report.check("R(0) = Id", worst, ctx.exact ? 0.0 : 1e-14);
}

template <class T>
void cmd_validate(Context<T>& ctx) {
  const auto& sys = ctx.sys;
  ctx.report.info("interval", "[" + str(sys.a()) + ", " + str(sys.b()) + "]");
  ctx.report.info("cuts", std::to_string(sys.ell()));
  for (std::size_t i = 0; i < sys.branch_count(); ++i) {
    ctx.report.info("branch " + std::to_string(i),
                    std::string(sys.sign(i) > 0 ? "increasing" : "decreasing") + ", weight " +
                        str(sys.weight(i)) + ", image [" + str(sys.image_lo(i)) + ", " +
                        str(sys.image_hi(i)) + "]");
  }
  ctx.report.info("continuous", sys.continuous() ? "yes" : "no");
}

template <class T>
void print_series(Report& report, const std::string& key, const TruncatedSeries<T>& s,
                  std::size_t terms) {
  std::string line;
  for (std::size_t n = 0; n <= std::min(terms, s.degree()); ++n) {
    line += (n ? " " : "") + str(s[n]);
  }
  report.info(key, line + (terms < s.degree() ? " ..." : ""));
}

template <class T>
void cmd_kneading(Context<T>& ctx) {
  const std::size_t N = ctx.cfg.N;
  const auto R = kneading_matrix(ctx.sys, N);
  const auto D = det(R);
  const auto DB = reduced_det(ctx.sys, N);
  for (std::size_t j = 0; j < R.dim(); ++j) {
    for (std::size_t k = 0; k < R.dim(); ++k) {
      print_series(ctx.report, "R[" + std::to_string(j) + "][" + std::to_string(k) + "]", R(j, k),
                   ctx.opt.terms);
    }
  }
  print_series(ctx.report, "det R", D, ctx.opt.terms);
  print_series(ctx.report, "det B", DB, ctx.opt.terms);
  identity_at_zero(ctx);

  const auto dir = ctx.out_dir();
  if (dir.empty()) return;
  for (std::size_t j = 0; j < R.dim(); ++j) {
    for (std::size_t k = 0; k < R.dim(); ++k) {
      Csv csv(ctx.report, dir, "theta_" + std::to_string(j) + "_" + std::to_string(k) + ".csv",
              "kneading-entry", "m,coeff");
      for (std::size_t m = 0; m <= N; ++m) csv.row(m, str(R(j, k)[m]));
    }
  }
  Csv csv(ctx.report, dir, "det.csv", "det", "n,coeff");
  for (std::size_t n = 0; n <= N; ++n) csv.row(n, str(D[n]));
}

template <class T>
void cmd_pressure(Context<T>& ctx) {
  const auto popt = ctx.pressure_options();
  const auto pr = pressure(ctx.sys, popt);
  auto& rep = ctx.report;
  rep.flag("zero found", pr.found);
  if (pr.found) {
    rep.info("t*", num(pr.t_star));
    rep.info("pressure", num(pr.pressure));
    rep.info("rho_1", num(pr.rho1));
    rep.info("truncated root", num(pr.t_truncated));
    rep.info("refined", pr.refined ? "yes" : "no");
    rep.info("stability gap", num(pr.stability_gap));
    rep.flag("stable under doubling N", !pr.unstable);
  }
  rep.info("t_max", num(pr.t_max));
  rep.info("rho_1 estimate", num(pr.rho1_hat) + " at depth " + std::to_string(pr.rho_depth));
  rep.info("rho_inf estimate", num(pr.rhoinf_hat));
  if (pr.possible_even_zero) rep.warn("possible even-order zero near t = " + num(*pr.possible_even_zero));
  for (const auto& w : pr.warnings) rep.warn(w);

  const auto sp = spurious_zero_demo(ctx.sys, popt);
  if (sp.det_b.found) {
    rep.info("det B first zero", num(sp.det_b.t));
    if (sp.differ) {
      rep.warn("det B vanishes at t = " + num(sp.det_b.t) +
               " before the first zero of det R; it is not the pressure");
    }
  }

  const auto dir = ctx.out_dir();
  if (dir.empty()) return;
  Csv csv(rep, dir, "scan.csv", "scan", "t,D_N");
  for (const auto& [t, d] : pressure_scan(ctx.sys, popt, pr.t_max)) csv.row(num(t), num(d));
}

template <class T>
void zeta_checks(Context<T>& ctx, bool table) {
  const auto zc = zeta_residual(ctx.sys, ctx.cfg.N_id, ctx.cfg.caps);
  if (table) {
    for (std::size_t n = 0; n < zc.counts.size(); ++n) {
      ctx.report.info("N_" + std::to_string(n + 1), str(zc.counts[n]));
    }
  }
  ctx.report.check("Z D - 1", max_abs(zc.product_residual), ctx.id_tol());
  ctx.report.check("N_f + D'/D", max_abs(zc.log_residual), ctx.id_tol());
  if (!table) return;
  const auto dir = ctx.out_dir();
  if (dir.empty()) return;
  Csv csv(ctx.report, dir, "nn.csv", "nn", "n,N_n");
  for (std::size_t n = 0; n < zc.counts.size(); ++n) csv.row(n + 1, str(zc.counts[n]));
}

template <class T>
std::vector<GermInterval<T>> random_intervals(const WeightedSystem<T>& sys, std::size_t count,
                                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const long grid = 1024;
  std::uniform_int_distribution<long> pos(1, grid - 1);
  std::vector<GermInterval<T>> out;
  for (std::size_t n = 0; n < count; ++n) {
    T u = sys.a() + (sys.b() - sys.a()) * T(pos(rng)) / T(grid);
    T v = sys.a() + (sys.b() - sys.a()) * T(pos(rng)) / T(grid);
    if (v < u) std::swap(u, v);
    switch (n % 4) {
      case 0: out.push_back(GermInterval<T>::open(u, v)); break;
      case 1: out.push_back(GermInterval<T>::closed(u, v)); break;
      case 2: out.push_back(GermInterval<T>({u, -1}, {v, -1})); break;
      default: out.push_back(GermInterval<T>::point(u)); break;
    }
  }
  return out;
}

template <class T>
void cmd_check(Context<T>& ctx) {
  const std::size_t N = ctx.cfg.N_id;
  auto& rep = ctx.report;
  identity_at_zero(ctx);

  double mki = 0;
  for (const auto& J : random_intervals(ctx.sys, 20, ctx.opt.seed)) {
    mki = std::max(mki, max_abs(mki_residual(ctx.sys, J, N)));
  }
  rep.check("MKI on 20 random intervals", mki, ctx.id_tol());
  rep.check("F R - R'", fast_identity_residual(ctx.sys, std::min<std::size_t>(N, 10)), ctx.id_tol());

  const auto mt = mt_relations(ctx.sys, N, random_germs(ctx.sys, 10, ctx.opt.seed));
  rep.check("key sum = 1", mt.key_residual, ctx.id_tol());
  rep.check("MT columns agree", mt.column_spread, ctx.id_tol());
  rep.check("D_MT = det R", mt.mt_vs_det, ctx.id_tol());
  rep.check("H det R = det B", mt.relation_residual, ctx.id_tol());
  rep.check("kappa row relation", mt.kappa_residual, ctx.id_tol());
  zeta_checks(ctx, false);
}

template <class T>
void write_phi(Context<T>& ctx, const std::filesystem::path& dir,
               const std::function<double(const Germ<T>&)>& phi) {
  Csv csv(ctx.report, dir, "phi.csv", "phi", "x,dir,value");
  for (const T& x : ctx.grid()) {
    for (int d : {-1, 1}) {
      const Germ<T> g{x, d};
      if (!ctx.sys.is_germ(g)) continue;
      csv.row(num(to_double(x)), d, num(phi(g)));
    }
  }
}

void write_model(Report& report, const std::filesystem::path& dir, const ModelMap& model) {
  Csv csv(report, dir, "model.csv", "model", "i,lo,hi,slope,intercept,degenerate");
  for (const auto& br : model.branches) {
    csv.row(br.i, num(br.lo), num(br.hi), num(br.slope), num(br.intercept), br.degenerate ? 1 : 0);
  }
}

template <class T>
void write_graph(Context<T>& ctx, const std::filesystem::path& dir) {
  Csv csv(ctx.report, dir, "graph.csv", "graph", "branch,x,y");
  const std::size_t per = std::max<std::size_t>(2, ctx.opt.grid / ctx.sys.branch_count());
  for (std::size_t i = 0; i < ctx.sys.branch_count(); ++i) {
    const T lo = ctx.sys.cut(i), hi = ctx.sys.cut(i + 1);
    for (std::size_t k = 0; k <= per; ++k) {
      const T x = lo + (hi - lo) * T(long(k)) / T(long(per));
      csv.row(i, num(to_double(x)), num(to_double(ctx.sys.apply(i, x))));
    }
  }
}

void report_model(Report& rep, const ModelMap& model) {
  for (const auto& br : model.branches) {
    rep.info("model branch " + std::to_string(br.i),
             "[" + num(br.lo) + ", " + num(br.hi) + "] slope " + num(br.slope) + " intercept " +
                 num(br.intercept) + (br.degenerate ? " (degenerate)" : ""));
  }
}

template <class T>
ModelMap subcritical(Context<T>& ctx, std::optional<SemiConjugacy<T>>& phi) {
  const double t = ctx.require_t();
  PhiOptions po;
  po.N = ctx.cfg.N;
  po.pressure = ctx.pressure_options();
  phi.emplace(ctx.sys, t, po);
  const auto model = model_map(*phi);
  auto& rep = ctx.report;
  rep.info("t", num(t));
  rep.info("t*", num(phi->t_star()));
  rep.info("tail bound", num(phi->tail_bound()));
  report_model(rep, model);
  rep.flag("model intervals pairwise disjoint", model.disjoint);
  double chord = 0;
  for (const auto& br : model.branches) chord = std::max(chord, br.chord_slope_error);
  rep.check("chord slope vs s_i/(t g_i)", chord, 1e-8);
  const auto germs = random_germs(ctx.sys, ctx.opt.samples, ctx.opt.seed);
  rep.check("semi-conjugacy residual", semiconj_residual(*phi, model, germs), 1e-9);
  return model;
}

template <class T>
void cmd_semiconj(Context<T>& ctx) {
  std::optional<SemiConjugacy<T>> phi;
  const auto model = subcritical(ctx, phi);
  const double t = phi->t();
  const auto germs = random_germs(ctx.sys, 100, ctx.opt.seed + 1);
  double cross = 0;
  for (const auto& g : germs) {
    const auto cc = h_crosscheck(ctx.sys, t, g);
    for (const auto& w : cc.warnings) ctx.report.warn(w);
    cross = std::max(cross, std::fabs(cc.value - (*phi)(g)));
  }
  ctx.report.check("matrix formula cross-check", cross, 1e-8);
  const auto dir = ctx.out_dir();
  if (dir.empty()) return;
  write_phi<T>(ctx, dir, [&](const Germ<T>& g) { return (*phi)(g); });
  write_model(ctx.report, dir, model);
}

template <class T>
ModelMap critical(Context<T>& ctx, std::optional<LambdaMeasure<T>>& lam) {
  LambdaOptions lo;
  lo.pressure = ctx.pressure_options();
  lam.emplace(ctx.sys, lo);
  const auto model = critical_model(*lam, ctx.sys);
  auto& rep = ctx.report;
  rep.info("rho_1", num(lam->rho1()));
  std::string kept, ct;
  for (std::size_t i : model.kept) kept += (kept.empty() ? "" : " ") + std::to_string(i);
  for (double c : model.c_tilde) ct += (ct.empty() ? "" : " ") + num(c);
  rep.info("surviving intervals", kept);
  rep.info("phi at cutting points", ct);
  rep.info("label", model.label);
  report_model(rep, model);
  double chord = 0;
  for (const auto& br : model.branches) chord = std::max(chord, br.chord_slope_error);
  rep.check("chord slope vs s_i rho_1 / g_i", chord, 1e-6);
  const std::size_t depth = std::min<std::size_t>(6, ctx.cfg.caps.max_depth);
  double mass = 0;
  for (double m : lambda_mass(*lam, ctx.sys, depth, ctx.cfg.caps)) mass = std::max(mass, std::fabs(m - 1));
  rep.check("Lambda mass over Z_n, n <= " + std::to_string(depth), mass, 1e-6);
  if (model.branches.size() >= 2) {
    const auto pr = pressure(model.as_system(), ctx.pressure_options());
    rep.check("model pressure - pressure", pr.found ? std::fabs(pr.pressure - std::log(lam->rho1())) : INFINITY,
              1e-6);
  } else {
    rep.warn("a single interval survives; the model pressure is not recomputed");
  }
  return model;
}

template <class T>
void cmd_model(Context<T>& ctx) {
  const auto dir = ctx.out_dir();
  if (ctx.opt.critical) {
    std::optional<LambdaMeasure<T>> lam;
    const auto model = critical(ctx, lam);
    if (!dir.empty()) write_model(ctx.report, dir, model);
    return;
  }
  std::optional<SemiConjugacy<T>> phi;
  const auto model = subcritical(ctx, phi);
  if (!dir.empty()) write_model(ctx.report, dir, model);
}

template <class T>
void cmd_cylinders(Context<T>& ctx) {
  const std::size_t n = ctx.opt.depth;
  auto caps = ctx.cfg.caps;
  const auto cyl = enumerate_cylinders(ctx.sys, n, caps);
  std::vector<Cylinder<T>> level;
  for (const auto& c : cyl) {
    if (c.depth() == n) level.push_back(c);
  }
  ctx.report.info("depth", std::to_string(n));
  ctx.report.info("cylinders", std::to_string(level.size()));
  T fixed(0);
  for (const auto& c : level) fixed += omega(ctx.sys, c);
  ctx.report.info("N_" + std::to_string(n), str(fixed));
  const auto dir = ctx.out_dir();
  if (dir.empty()) return;
  Csv csv(ctx.report, dir, "cylinders.csv", "cylinders", "word,u,v,sn,gn,pi,omega");
  for (const auto& c : level) {
    csv.row(word_string(c), str(c.u), str(c.v), c.sn, str(c.gn), pi_weight(ctx.sys, c),
            str(omega(ctx.sys, c)));
  }
}

template <class T>
void cmd_emit_plots(Context<T>& ctx) {
  const std::filesystem::path dir = ctx.out_dir("plots");
  std::optional<SemiConjugacy<T>> phi;
  const auto model = subcritical(ctx, phi);
  const auto sub = dir / "subcritical";
  write_graph(ctx, sub);
  write_phi<T>(ctx, sub, [&](const Germ<T>& g) { return (*phi)(g); });
  write_model(ctx.report, sub, model);

  std::optional<LambdaMeasure<T>> lam;
  const auto crit = critical(ctx, lam);
  const auto top = dir / "critical";
  write_graph(ctx, top);
  write_phi<T>(ctx, top, [&](const Germ<T>& g) {
    if (g.base == ctx.sys.a()) return 0.0;
    if (g.base == ctx.sys.b()) return 1.0;
    return lam->phi(g.base).value;
  });
  write_model(ctx.report, top, crit);
}

template <class T>
void dispatch(const std::string& command, Context<T>& ctx) {
  if (command == "validate") return cmd_validate(ctx);
  if (command == "kneading") return cmd_kneading(ctx);
  if (command == "pressure") return cmd_pressure(ctx);
  if (command == "zeta") return zeta_checks(ctx, true);
  if (command == "check") return cmd_check(ctx);
  if (command == "semiconj") return cmd_semiconj(ctx);
  if (command == "model") return cmd_model(ctx);
  if (command == "cylinders") return cmd_cylinders(ctx);
  if (command == "emit-plots") return cmd_emit_plots(ctx);
  throw Error("unknown command " + command);
}

RunConfig load(const Options& opt) {
  RunConfig cfg = parse_config(opt.config, opt.params);
  if (opt.N) cfg.N = *opt.N;
  if (opt.N_id) cfg.N_id = *opt.N_id;
  if (opt.depth_cap) cfg.caps.max_depth = *opt.depth_cap;
  if (opt.tol) cfg.tol = *opt.tol;
  if (opt.arithmetic) {
    if (*opt.arithmetic == "float64") {
      cfg.arithmetic = Arithmetic::float64;
    } else if (*opt.arithmetic == "exact") {
      cfg.arithmetic = Arithmetic::exact;
    } else {
      throw ConfigError("--arithmetic", "expected float64 or exact");
    }
  }
  if (cfg.N == 0 || cfg.N_id == 0 || cfg.N_id > cfg.N) {
    throw ConfigError("N_id", "need 0 < N_id <= N");
  }
  return cfg;
}

template <class T>
bool execute(const std::string& command, const RunConfig& cfg, const Options& opt,
             std::ostream& out) {
  const auto sys = make_system<T>(cfg);
  Report report(command);
  Context<T> ctx{cfg, sys, opt, report};
  dispatch(command, ctx);
  std::string label = cfg.name.empty() ? cfg.path : cfg.name;
  label += ScalarTraits<T>::exact ? " (exact)" : " (float64)";
  report.print(out, opt.json, label);
  return report.ok();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted kneading theory for piecewise monotone interval maps"};
  app.require_subcommand(1);
  Options opt;

  auto common = [&](CLI::App* sub) {
    sub->add_option("config", opt.config, "system file (YAML)")->required();
    sub->add_option("--param", opt.params, "override a parameter, NAME=VALUE");
    sub->add_option("--N", opt.N, "truncation degree");
    sub->add_option("--N-id", opt.N_id, "degree for identity checks");
    sub->add_option("--depth-cap", opt.depth_cap, "cylinder depth cap");
    sub->add_option("--arithmetic", opt.arithmetic, "float64 or exact");
    sub->add_option("--tol", opt.tol, "zero-search tolerance");
    sub->add_option("--out", opt.out, "directory for CSV output");
    sub->add_option("--seed", opt.seed, "seed for sampled germs and intervals");
    sub->add_flag("--json", opt.json, "print the report as JSON");
    return sub;
  };
  common(app.add_subcommand("validate", "validate a system file"));
  common(app.add_subcommand("kneading", "kneading matrix and determinants"))
      ->add_option("--terms", opt.terms, "coefficients to print");
  common(app.add_subcommand("pressure", "first zero of the kneading determinant"));
  common(app.add_subcommand("zeta", "periodic point counts and the zeta identity"));
  common(app.add_subcommand("check", "identity suite"));
  auto* semi = common(app.add_subcommand("semiconj", "semi-conjugacy at a fixed t"));
  semi->add_option("--t", opt.t, "parameter 0 < t < t*")->required();
  semi->add_option("--samples", opt.samples, "germs sampled for the residual");
  semi->add_option("--grid", opt.grid, "grid points in phi.csv");
  auto* model = common(app.add_subcommand("model", "PL model at t or at the critical parameter"));
  auto* t_opt = model->add_option("--t", opt.t, "parameter 0 < t < t*");
  auto* c_opt = model->add_flag("--critical", opt.critical, "model at t = 1/rho_1");
  t_opt->excludes(c_opt);
  model->add_option("--samples", opt.samples, "germs sampled for the residual");
  common(app.add_subcommand("cylinders", "list the n-cylinders"))
      ->add_option("--depth", opt.depth, "cylinder depth");
  auto* plots = common(app.add_subcommand("emit-plots", "graph, phi and model CSVs"));
  plots->add_option("--t", opt.t, "subcritical parameter")->required();
  plots->add_option("--grid", opt.grid, "grid points per CSV");
  plots->add_option("--samples", opt.samples, "germs sampled for the residual");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  if (command == "model" && !opt.critical && !opt.t) {
    err << "model: give --t or --critical\n";
    return 2;
  }

  try {
    const RunConfig cfg = load(opt);
    const bool ok = cfg.arithmetic == Arithmetic::exact
                        ? execute<Rational>(command, cfg, opt, out)
                        : execute<double>(command, cfg, opt, out);
    return ok ? 0 : 1;
  } catch (const std::exception& e) {
    const std::string kind = dynamic_cast<const ConfigError*>(&e)       ? "config"
                             : dynamic_cast<const ValidationError*>(&e) ? "validation"
                             : dynamic_cast<const PreconditionError*>(&e) ? "precondition"
                                                                           : "error";
    if (opt.json) {
      Json j{{"command", command}, {"ok", false}, {"error", kind}, {"message", e.what()}};
      out << j.dump(2) << "\n";
    } else {
      err << kind << ": " << e.what() << "\n";
    }
    return 2;
  }
}

}  // namespace knead::cli
