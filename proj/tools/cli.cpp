#include "crossdiff/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <list>
#include <map>
#include <ostream>

#include "crossdiff/config.hpp"
#include "crossdiff/equilibria.hpp"
#include "crossdiff/errors.hpp"
#include "crossdiff/format.hpp"
#include "crossdiff/io.hpp"
#include "crossdiff/metrics.hpp"
#include "crossdiff/ode.hpp"
#include "crossdiff/pde.hpp"
#include "crossdiff/stability.hpp"

namespace fs = std::filesystem;

namespace crossdiff {

namespace {

// Options shared by every subcommand: scenario, config file, output directory and
// one flag per model parameter (plus the solver keys for simulate). Values are kept
// as text and applied through the same path as config-file entries.
struct Common {
  std::string name;
  std::string config;
  std::string out_dir;
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;

  void add_key(CLI::App* app, const std::string& key, const std::string& flag, const std::string& help) {
    options.emplace_back(key, app->add_option(flag, values[key], help));
  }

  KeyValues flags() const {
    KeyValues kv;
    for (const auto& [key, opt] : options)
      if (opt->count() > 0) kv.emplace_back(key, values.at(key));
    return kv;
  }
};

void add_common(CLI::App* app, Common& c, bool solver) {
  c.add_key(app, "scenario", "--scenario", "untreated | treated | kirschner-table1");
  app->add_option("--config", c.config, "key=value file; flags override its entries");
  app->add_option("--out", c.out_dir, "output directory (default $CROSSDIFF_OUT or ./crossdiff_out)");
  for (const auto& [name, member] : kParamFields) {
    (void)member;
    c.add_key(app, std::string(name), "--" + std::string(name), "model parameter " + std::string(name));
  }
  if (!solver) return;
  for (std::string_view key : solver_keys()) {
    if (key == "scenario") continue;
    std::string flag = "--" + std::string(key);
    std::replace(flag.begin() + 2, flag.end(), '_', '-');
    c.add_key(app, std::string(key), flag, "solver setting " + std::string(key));
  }
}

fs::path output_dir(const Common& c) {
  if (!c.out_dir.empty()) return c.out_dir;
  if (const char* env = std::getenv("CROSSDIFF_OUT"); env && *env) return env;
  return "crossdiff_out";
}

RunConfig resolve(const Common& c) {
  const KeyValues file = c.config.empty() ? KeyValues{} : read_key_values(c.config);
  RunConfig cfg = resolve_run_config(file, c.flags());
  cfg.params.validate();
  return cfg;
}

fs::path start_run(const Common& c, const std::string& subcommand, const std::vector<std::string>& args,
                   const RunConfig& cfg, std::vector<std::pair<std::string, std::string>> extra) {
  const fs::path dir = output_dir(c);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ArgumentError("cannot create output directory " + dir.string());
  RunManifest m;
  m.subcommand = subcommand;
  m.args = args;
  m.config_path = c.config;
  m.output_dir = dir.string();
  m.params = cfg.params;
  m.extra = std::move(extra);
  m.version = CROSSDIFF_VERSION;
  write_text(dir / "manifest.txt", to_text(m));
  return dir;
}

std::string describe(const Equilibrium& e) {
  std::string s = std::string(to_string(e.kind)) + "  (" + fmt(e.state.u) + ", " + fmt(e.state.v) + ", " +
                  fmt(e.state.w) + ")  eig:";
  for (const auto& z : e.eigenvalues) {
    s += ' ' + fmt(z.real());
    if (z.imag() != 0.0) s += (z.imag() > 0 ? "+" : "-") + fmt(std::abs(z.imag())) + "i";
  }
  return s + "  " + to_string(e.stability);
}

std::vector<double> linspace(double lo, double hi, std::size_t n, bool log_scale) {
  if (n == 0) throw ArgumentError("grid needs at least one point");
  if (log_scale && !(lo > 0.0)) throw ArgumentError("log-spaced grid needs a positive lower end");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = log_scale ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))) : lo + f * (hi - lo);
  }
  return out;
}

std::optional<Equilibrium> main_cce(const ModelParams& p) {
  auto roots = cce_solve(p);
  if (roots.empty()) return std::nullopt;
  return roots.back();
}

Scenario scenario_rule(const ModelParams& p) {
  return (p.s1 != 0.0 || p.s3 != 0.0) ? Scenario::Treated : Scenario::Untreated;
}

// --- subcommands -----------------------------------------------------------

int cmd_equilibria(const Common& c, const std::vector<std::string>& args, std::ostream& out) {
  const RunConfig cfg = resolve(c);
  const fs::path dir = start_run(c, "equilibria", args, cfg, {});
  std::vector<Equilibrium> eqs;
  if (auto e = cfe(cfg.params)) eqs.push_back(*e);
  for (auto& e : cce_solve(cfg.params)) eqs.push_back(e);
  for (const auto& e : eqs) out << describe(e) << '\n';
  write_text(dir / "equilibria.csv", equilibria_csv(eqs));
  if (eqs.empty()) {
    out << "no equilibrium found\n";
    return kExitNoResult;
  }
  return kExitOk;
}

struct DispersionOpts {
  double k_max = 300.0;
  double k_step = 0.5;
  bool find_critical = false;
  double d32_lo = -3.0;
  double d32_hi = 0.0;
  std::optional<double> reference;
};

int cmd_dispersion(const Common& c, const DispersionOpts& o, const std::vector<std::string>& args,
                   std::ostream& out) {
  const RunConfig cfg = resolve(c);
  if (!(o.k_max >= 0.0) || !(o.k_step > 0.0)) throw ArgumentError("--k-max must be >= 0 and --k-step > 0");
  const fs::path dir = start_run(c, "dispersion", args, cfg,
                                 {{"k_max", fmt(o.k_max)}, {"k_step", fmt(o.k_step)}});
  const auto eq = main_cce(cfg.params);
  if (!eq) {
    out << "no coexistence equilibrium for these parameters\n";
    return kExitNoResult;
  }
  std::vector<double> ks;
  const auto n = static_cast<std::size_t>(std::floor(o.k_max / o.k_step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) ks.push_back(static_cast<double>(i) * o.k_step);
  const DispersionResult d = dispersion_relation(cfg.params, eq->state, ks);
  write_text(dir / "dispersion.csv", dispersion_csv(d));

  out << "equilibrium " << describe(*eq) << '\n';
  out << "growth_max=" << fmt(d.growth_max) << " at k=" << fmt(d.k_max) << '\n';
  double band_lo = NAN, band_hi = NAN;
  for (const auto& pt : d.points) {
    if (pt.growth > 0.0) {
      if (std::isnan(band_lo)) band_lo = pt.k;
      band_hi = pt.k;
    }
  }
  if (!std::isnan(band_lo)) {
    out << "unstable_band=[" << fmt(band_lo) << ", " << fmt(band_hi) << "]\n";
    out << "nearest_modes=";
    for (const auto& m : nearest_neumann_modes(d.k_max, 2, 3))
      out << " (" << m.m << "," << m.n << ",k=" << fmt(m.k) << ")";
    out << '\n';
  }
  const DispersionPolynomial poly = dispersion_polynomial(cfg.params, eq->state);
  out << "a2(k)=" << fmt(poly.a2[0]) << " + " << fmt(poly.a2[1]) << " k^2\n";
  out << "a1(k)=" << fmt(poly.a1[0]) << " + " << fmt(poly.a1[1]) << " k^2 + " << fmt(poly.a1[2]) << " k^4\n";
  out << "a0(k)=" << fmt(poly.a0[0]) << " + " << fmt(poly.a0[1]) << " k^2 + " << fmt(poly.a0[2]) << " k^4 + "
      << fmt(poly.a0[3]) << " k^6\n";
  if (!o.find_critical) return kExitOk;

  try {
    const double thr = determinant_threshold_d32(cfg.params, eq->state, o.d32_lo, o.d32_hi, ks);
    out << "determinant_threshold_d32=" << fmt(thr) << '\n';
  } catch (const BracketError& e) {
    out << "determinant_threshold_d32=none (" << e.what() << ")\n";
  }
  const double reference = o.reference.value_or(scenario_rule(cfg.params) == Scenario::Treated ? -1.45136 : -1.0668);
  double thr = 0.0;
  try {
    thr = critical_d32(cfg.params, eq->state, o.d32_lo, o.d32_hi, ks);
  } catch (const BracketError& e) {
    out << "critical_d32=none: " << e.what() << '\n' << "reference_d32=" << fmt(reference) << '\n';
    return kExitNoResult;
  }
  ModelParams lo = cfg.params, hi = cfg.params;
  lo.d32 = thr - 0.01;
  hi.d32 = thr + 0.01;
  const double g_lo = dispersion_relation(lo, eq->state, ks).growth_max;
  const double g_hi = dispersion_relation(hi, eq->state, ks).growth_max;
  out << "critical_d32=" << fmt(thr) << '\n'
      << "growth_max(d32-0.01)=" << fmt(g_lo) << '\n'
      << "growth_max(d32+0.01)=" << fmt(g_hi) << '\n'
      << "brackets=" << (((g_lo > 0.0) != (g_hi > 0.0)) ? "true" : "false") << '\n'
      << "reference_d32=" << fmt(reference) << '\n'
      << "discrepancy=" << fmt(thr - reference) << '\n';
  return kExitOk;
}

int cmd_hopf(const Common& c, double lo, double hi, double tol, const std::vector<std::string>& args,
             std::ostream& out) {
  const RunConfig cfg = resolve(c);
  start_run(c, "hopf", args, cfg, {{"p2_lo", fmt(lo)}, {"p2_hi", fmt(hi)}, {"tol", fmt(tol)}});
  try {
    const auto h = hopf_scan(cfg.params, lo, hi, tol);
    if (!h) {
      out << "no crossing in [" << fmt(lo) << ", " << fmt(hi) << "]\n";
      return kExitNoResult;
    }
    out << "p2_critical=" << fmt(h->p2_critical) << '\n'
        << "eigenvalue=" << fmt(h->eigenvalue.real()) << (h->eigenvalue.imag() >= 0 ? "+" : "-")
        << fmt(std::abs(h->eigenvalue.imag())) << "i\n"
        << "bracket=[" << fmt(h->bracket.first) << ", " << fmt(h->bracket.second) << "]\n"
        << "equilibrium=(" << fmt(h->equilibrium.u) << ", " << fmt(h->equilibrium.v) << ", "
        << fmt(h->equilibrium.w) << ")\n";
    return kExitOk;
  } catch (const BranchLostError& e) {
    out << "no crossing: " << e.what() << '\n';
    return kExitNoResult;
  }
}

struct RegionOpts {
  double p2_min = 1e-2, p2_max = 10.0;
  std::size_t p2_n = 50;
  double c_min = 0.0, c_max = 1.0;
  std::size_t c_n = 50;
  bool linear_p2 = false;
};

int cmd_region(const Common& c, const RegionOpts& o, const std::vector<std::string>& args, std::ostream& out) {
  const RunConfig cfg = resolve(c);
  const auto p2 = linspace(o.p2_min, o.p2_max, o.p2_n, !o.linear_p2);
  const auto cs = linspace(o.c_min, o.c_max, o.c_n, false);
  const Scenario rule = scenario_rule(cfg.params);
  const fs::path dir = start_run(c, "region", args, cfg,
                                 {{"p2_range", fmt(o.p2_min) + ":" + fmt(o.p2_max) + ":" + std::to_string(o.p2_n)},
                                  {"c_range", fmt(o.c_min) + ":" + fmt(o.c_max) + ":" + std::to_string(o.c_n)},
                                  {"rule", rule == Scenario::Treated ? "treated" : "untreated"}});
  const RegionGrid g = existence_region_scan(cfg.params, p2, cs, rule);
  write_text(dir / "region.csv", region_csv(g));
  std::size_t count = 0;
  for (auto e : g.exists) count += e;
  out << "true_points=" << count << " of " << g.exists.size() << '\n';
  return kExitOk;
}

int cmd_simulate(const Common& c, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = resolve(c);
  SimConfig sim = cfg.sim_config();
  if (cfg.ic_equilibrium) {
    const auto eq = main_cce(cfg.params);
    if (!eq) {
      err << "ic = equilibrium but there is no coexistence equilibrium\n";
      return kExitNoResult;
    }
    sim.uniform_state = eq->state;
  }
  sim.validate();

  std::vector<std::pair<std::string, std::string>> extra;
  for (const auto& kv : parse_key_values(to_key_values(cfg))) extra.emplace_back("run." + kv.first, kv.second);
  const fs::path dir = start_run(c, "simulate", args, cfg, extra);
  write_text(dir / "resolved.cfg", to_key_values(cfg));

  std::size_t index = 0;
  std::string index_csv = "index,time,u_min,u_max,v_min,v_max,v_variance,w_min,w_max\n";
  auto emit = [&](const Snapshot& s, std::size_t i) {
    char stem[32];
    std::snprintf(stem, sizeof stem, "snap_%04zu", i);
    write_snapshot_binary(dir / (std::string(stem) + ".bin"), s.grid);
    for (Field f : {Field::U, Field::V, Field::W}) {
      const std::string base = std::string(stem) + "_" + to_string(f);
      write_text(dir / (base + ".csv"), field_csv(s.grid, f));
      if (cfg.png) write_bytes(dir / (base + ".png"), heatmap_png(s.grid.field(f), s.grid.nx, s.grid.ny));
    }
  };
  const SimulationResult res = simulate(sim, [&](const Snapshot& s) {
    index_csv += std::to_string(index) + ',' + fmt(s.time) + ',' + fmt(s.stats[0].min) + ',' + fmt(s.stats[0].max) +
                 ',' + fmt(s.stats[1].min) + ',' + fmt(s.stats[1].max) + ',' + fmt(s.stats[1].variance) + ',' +
                 fmt(s.stats[2].min) + ',' + fmt(s.stats[2].max) + '\n';
    if (cfg.field_output == FieldOutput::All) emit(s, index);
    ++index;
  });
  if (cfg.field_output == FieldOutput::Final) emit(res.snapshots.back(), res.snapshots.size() - 1);
  write_text(dir / "snapshots.csv", index_csv);

  const PatternReport rep = pattern_report(res.snapshots, cfg.probe_x, cfg.probe_y);
  std::string text = to_key_value(rep);
  text += "min_value=" + fmt(res.min_value) + "\nmin_time=" + fmt(res.min_time) +
          "\nnegativity_warned=" + (res.negativity_warned ? "true" : "false") + "\n";
  write_text(dir / "pattern_report.txt", text);
  write_text(dir / "pattern_report.csv", pattern_csv_header() + "\n" + pattern_csv_row(rep) + "\n");
  if (res.snapshots.size() >= 8) write_text(dir / "probe.csv", probe_csv(probe_series(res.snapshots, cfg.probe_x, cfg.probe_y)));
  if (res.negativity_warned)
    err << "warning: values dropped to " << fmt(res.min_value) << " (t = " << fmt(res.min_time) << ")\n";
  out << text;
  return kExitOk;
}

struct OdeOpts {
  double u0 = 0.1, v0 = 0.3, w0 = 1.0;
  double t_end = 1000.0;
  double dt = 1e-3;
  std::size_t record_every = 10;
  double transient = 0.5;
};

int cmd_ode(const Common& c, const OdeOpts& o, const std::vector<std::string>& args, std::ostream& out) {
  const RunConfig cfg = resolve(c);
  const fs::path dir = start_run(c, "ode", args, cfg,
                                 {{"u0", fmt(o.u0)}, {"v0", fmt(o.v0)}, {"w0", fmt(o.w0)}, {"t_end", fmt(o.t_end)},
                                  {"dt", fmt(o.dt)}, {"record_every", std::to_string(o.record_every)}});
  const Trajectory tr = integrate(cfg.params, {o.u0, o.v0, o.w0}, o.t_end, o.dt, o.record_every);
  write_text(dir / "trajectory.csv", trajectory_csv(tr));
  const State& last = tr.x.back();
  out << "final=(" << fmt(last.u) << ", " << fmt(last.v) << ", " << fmt(last.w) << ") at t=" << fmt(tr.t.back())
      << '\n';
  const auto m = cycle_metrics(tr, o.transient);
  if (!m) {
    out << "cycle=none\n";
    return kExitOk;
  }
  out << "period=" << fmt(m->period) << '\n'
      << "amplitude=(" << fmt(m->amplitude.u) << ", " << fmt(m->amplitude.v) << ", " << fmt(m->amplitude.w) << ")\n"
      << "mean=(" << fmt(m->mean.u) << ", " << fmt(m->mean.v) << ", " << fmt(m->mean.w) << ")\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cross-diffusion tumor-immune model: equilibria, stability, simulation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(CROSSDIFF_VERSION));

  std::list<Common> commons;
  auto sub = [&](const char* name, const char* help, bool solver) {
    CLI::App* s = app.add_subcommand(name, help);
    commons.push_back({});
    commons.back().name = name;
    add_common(s, commons.back(), solver);
    return std::make_pair(s, &commons.back());
  };

  auto [eq_app, eq_c] = sub("equilibria", "cancer-free and coexistence equilibria with eigenvalues", false);

  DispersionOpts disp;
  double reference = 0.0;
  auto [disp_app, disp_c] = sub("dispersion", "growth rate versus wavenumber at the coexistence equilibrium", false);
  disp_app->add_option("--k-max", disp.k_max, "largest wavenumber");
  disp_app->add_option("--k-step", disp.k_step, "wavenumber spacing");
  disp_app->add_flag("--find-critical", disp.find_critical, "bisect the d32 threshold");
  disp_app->add_option("--d32-lo", disp.d32_lo, "bisection bracket, lower end");
  disp_app->add_option("--d32-hi", disp.d32_hi, "bisection bracket, upper end");
  CLI::Option* ref_opt = disp_app->add_option("--reference", reference, "threshold to compare against");

  double p2_lo = 0.3, p2_hi = 0.58, tol = 1e-4;
  auto [hopf_app, hopf_c] = sub("hopf", "Hopf point of the coexistence branch in p2", false);
  hopf_app->add_option("--p2-lo", p2_lo, "scan start");
  hopf_app->add_option("--p2-hi", p2_hi, "scan end");
  hopf_app->add_option("--tol", tol, "bisection tolerance in p2");

  RegionOpts reg;
  auto [reg_app, reg_c] = sub("region", "existence region of the coexistence equilibrium over (p2, c)", false);
  reg_app->add_option("--p2-min", reg.p2_min, "lowest p2");
  reg_app->add_option("--p2-max", reg.p2_max, "highest p2");
  reg_app->add_option("--p2-n", reg.p2_n, "number of p2 points");
  reg_app->add_option("--c-min", reg.c_min, "lowest c");
  reg_app->add_option("--c-max", reg.c_max, "highest c");
  reg_app->add_option("--c-n", reg.c_n, "number of c points");
  reg_app->add_flag("--linear-p2", reg.linear_p2, "linear instead of logarithmic p2 spacing");

  auto [sim_app, sim_c] = sub("simulate", "explicit finite-difference run with snapshots and pattern report", true);

  OdeOpts ode;
  auto [ode_app, ode_c] = sub("ode", "RK4 trajectory of the kinetics and limit-cycle metrics", false);
  ode_app->add_option("--u0", ode.u0, "initial effector density");
  ode_app->add_option("--v0", ode.v0, "initial tumor density");
  ode_app->add_option("--w0", ode.w0, "initial IL-2 density");
  ode_app->add_option("--t-end", ode.t_end, "final time");
  ode_app->add_option("--dt", ode.dt, "RK4 step");
  ode_app->add_option("--record-every", ode.record_every, "keep every n-th step");
  ode_app->add_option("--transient", ode.transient, "time discarded before cycle metrics");

  std::vector<const char*> argv{"crossdiff"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }
  if (ref_opt->count() > 0) disp.reference = reference;

  try {
    if (eq_app->parsed()) return cmd_equilibria(*eq_c, args, out);
    if (disp_app->parsed()) return cmd_dispersion(*disp_c, disp, args, out);
    if (hopf_app->parsed()) return cmd_hopf(*hopf_c, p2_lo, p2_hi, tol, args, out);
    if (reg_app->parsed()) return cmd_region(*reg_c, reg, args, out);
    if (sim_app->parsed()) return cmd_simulate(*sim_c, args, out, err);
    if (ode_app->parsed()) return cmd_ode(*ode_c, ode, args, out);
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const BracketError& e) {
    err << "no result: " << e.what() << '\n';
    return kExitNoResult;
  } catch (const NegativityError& e) {
    err << "numerical failure: " << e.what() << " (use negativity = warn to continue)\n";
    return kExitNumerical;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace crossdiff
