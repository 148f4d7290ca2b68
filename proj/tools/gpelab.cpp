// Command line front end: every subcommand reads one INI config, writes its
// outputs under --out, and prints a short summary to stdout. All outputs are
// deterministic; the first line of every generated file is a manifest with
// the tool version and the config hash.

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gpelab/config.hpp"
#include "gpelab/control.hpp"
#include "gpelab/elliptic.hpp"
#include "gpelab/errors.hpp"
#include "gpelab/evolution.hpp"
#include "gpelab/io.hpp"
#include "gpelab/model.hpp"
#include "gpelab/spectral.hpp"
#include "gpelab/stationary.hpp"
#include "gpelab/sweep.hpp"
#include "gpelab/version.hpp"

namespace fs = std::filesystem;
using namespace gpelab;

namespace {

std::string out_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

double parse_number(const std::string& tok, const std::string& context) {
  try {
    size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(context + ": bad number '" + tok + "'");
  }
}

PotentialSpec potential_from(const Config& cfg) {
  const std::string kind = cfg.get_string("potential", "kind", "zero");
  if (kind == "zero") return ZeroPotential{};
  if (kind == "sn") {
    const double V0 = cfg.require_double("potential", "V0");
    const double k = cfg.require_double("potential", "k");
    if (!(k > 0.0 && k < 1.0))
      throw ConfigError("potential.k = " + format_double(k) + " must lie in (0, 1)");
    return SnLattice{V0, k};
  }
  if (kind == "cosine") {
    const double V0 = cfg.require_double("potential", "V0");
    const double w = cfg.require_double("potential", "wavenumber");
    if (!(w > 0.0)) throw ConfigError("potential.wavenumber must be positive");
    return CosineLattice{V0, w};
  }
  if (kind == "file")
    return load_tabulated_potential(cfg.require_string("potential", "path"));
  throw ConfigError("potential.kind = '" + kind + "' (expected zero, sn, cosine, or file)");
}

Grid grid_from(const Config& cfg, const PotentialSpec& pot) {
  const int n = cfg.get_int("grid", "n", 0);
  if (n < 8) throw ConfigError("grid.n must be an integer >= 8");
  if (cfg.has("grid", "length")) {
    const Grid g(n, cfg.require_double("grid", "length"));
    periods_on_grid(pot, g);
    return g;
  }
  const int periods = cfg.get_int("grid", "periods", 1);
  if (periods < 1) throw ConfigError("grid.periods must be >= 1");
  return grid_over_periods(pot, n, periods);
}

void write_with_manifest(const std::string& path, const Config& cfg, const std::string& body) {
  write_text_file(path, manifest_line(cfg.raw_text()) + "\n" + body);
}

// solve: produce a stationary state from the closed form or a Newton run and
// serialize it for the downstream subcommands.
int cmd_solve(const Config& cfg, const std::string& out_dir) {
  const PotentialSpec pot = potential_from(cfg);
  const Grid grid = grid_from(cfg, pot);
  const std::string source = cfg.get_string("solver", "source", "exact");
  const double g1 = cfg.require_double("solver", "g1");
  NewtonOptions opt;
  opt.tol = cfg.get_double("solver", "tol", 1e-10);
  opt.max_iter = cfg.get_int("solver", "max_iter", 50);
  opt.lap = laplacian_kind_from_name(cfg.get_string("solver", "laplacian", "spectral"));
  const int n_lattice = cfg.get_int("solver", "n_lattice", 1);

  double mu_request = 0.0, N_request = 0.0;
  std::string guess_kind;
  double guess_amplitude = 0.0;
  if (source == "newton") {
    mu_request = cfg.require_double("solver", "mu");
    guess_kind = cfg.get_string("solver", "guess", "tf");
    guess_amplitude = cfg.get_double("solver", "guess_amplitude", 1.0);
    if (guess_kind != "tf" && guess_kind != "constant")
      throw ConfigError("solver.guess = '" + guess_kind + "' (expected tf or constant)");
    if (guess_kind == "tf" && !(g1 > 0.0))
      throw ConfigError("solver.guess = tf needs g1 > 0; use guess = constant");
  } else if (source == "fixed_n") {
    N_request = cfg.require_double("solver", "N");
  } else if (source != "exact") {
    throw ConfigError("solver.source = '" + source + "' (expected exact, newton, or fixed_n)");
  }
  const std::string state_name = cfg.get_string("output", "state", "state.txt");
  cfg.require_all_used();

  StationaryState st;
  if (source == "exact") {
    const auto* sn = std::get_if<SnLattice>(&pot);
    if (!sn) throw ConfigError("solver.source = exact requires potential.kind = sn");
    st = exact_sn_state(sn->V0, sn->k, g1, grid, opt.lap);
  } else if (source == "newton") {
    Eigen::VectorXd guess;
    if (guess_kind == "tf") {
      const TFState tf = thomas_fermi_state(pot, mu_request, g1, grid);
      if (tf.empty) throw ConfigError("solver.mu is below min V; the TF guess is empty");
      guess = tf.R_tf;
    } else {
      guess = Eigen::VectorXd::Constant(grid.n, guess_amplitude);
    }
    st = solve_newton(pot, mu_request, g1, guess, grid, opt);
  } else {
    st = solve_fixed_N(pot, N_request, n_lattice, g1, grid, opt);
  }

  ensure_dir(out_dir);
  save_state(st, out_path(out_dir, state_name), manifest_line(cfg.raw_text()));
  std::printf("mu = %s\n", format_double(st.mu).c_str());
  std::printf("N = %s\n", format_double(atom_number(st, n_lattice)).c_str());
  std::printf("residual = %s\n", format_double(residual(st)).c_str());
  std::printf("newton_iterations = %d\n", st.newton_iterations);
  if (st.trivial) std::printf("trivial = 1\n");
  std::printf("state -> %s\n", out_path(out_dir, state_name).c_str());
  return 0;
}

int cmd_classify(const Config& cfg, const std::string& out_dir) {
  const std::string state_path = cfg.require_string("input", "state");
  const bool custom_eps = cfg.has("classify", "eps");
  const double eps = cfg.get_double("classify", "eps", 0.0);
  const std::string text_name = cfg.get_string("output", "verdict_text", "verdict.txt");
  const std::string csv_name = cfg.get_string("output", "verdict_csv", "verdict.csv");
  cfg.require_all_used();

  const StationaryState st = load_state(state_path);
  const StabilityVerdict v = custom_eps ? classify(st, eps) : classify(st);

  ensure_dir(out_dir);
  const std::string text = verdict_text(st, v);
  write_with_manifest(out_path(out_dir, text_name), cfg, text);
  write_with_manifest(out_path(out_dir, csv_name), cfg,
                      verdict_csv_header() + "\n" + verdict_csv_row(st, v) + "\n");
  std::fputs(text.c_str(), stdout);
  return 0;
}

int steps_from_config(const Config& cfg, const std::string& section, double dt) {
  const bool has_steps = cfg.has(section, "steps");
  const bool has_t_end = cfg.has(section, "t_end");
  if (has_steps == has_t_end)
    throw ConfigError(section + " needs exactly one of steps or t_end");
  if (has_steps) {
    const int steps = cfg.get_int(section, "steps", 0);
    if (steps < 1) throw ConfigError(section + ".steps must be >= 1");
    return steps;
  }
  const double t_end = cfg.require_double(section, "t_end");
  if (!(t_end > 0.0)) throw ConfigError(section + ".t_end must be positive");
  return static_cast<int>(std::ceil(t_end / dt));
}

void write_field_snapshots(const Config& cfg, const std::string& out_dir,
                           const Grid& grid, const std::vector<PerturbationField>& snaps) {
  for (size_t i = 0; i < snaps.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "snap_%04zu.csv", i);
    std::string body = "# time = " + format_double(snaps[i].time) + "\nx,phi1,phi2\n";
    for (int j = 0; j < grid.n; ++j)
      body += format_double(grid.x[j]) + "," + format_double(snaps[i].phi1[j]) + "," +
              format_double(snaps[i].phi2[j]) + "\n";
    write_with_manifest(out_path(out_dir, name), cfg, body);
  }
}

int cmd_evolve(const Config& cfg, const std::string& out_dir) {
  const std::string state_path = cfg.require_string("input", "state");
  const StationaryState st = load_state(state_path);
  const std::string kind = cfg.get_string("evolve", "kind", "linearized");
  const std::string traj_name = cfg.get_string("output", "trajectory", "trajectory.csv");
  const int record_every = cfg.get_int("evolve", "record_every", 1);
  const int snapshot_every = cfg.get_int("evolve", "snapshot_every", 0);

  if (kind == "linearized") {
    const int mode_index = cfg.get_int("evolve", "mode_index", 0);
    const double T1_0 = cfg.get_double("evolve", "T1_0", 1.0);
    const double T2_0 = cfg.get_double("evolve", "T2_0", 0.0);
    double dt = cfg.get_double("evolve", "dt", 0.0);
    if (dt == 0.0) dt = default_dt(st);
    const int steps = steps_from_config(cfg, "evolve", dt);
    const Scheme scheme = scheme_from_name(cfg.get_string("evolve", "scheme", "leapfrog"));
    const bool has_lo = cfg.has("evolve", "fit_t_lo"), has_hi = cfg.has("evolve", "fit_t_hi");
    if (has_lo != has_hi) throw ConfigError("evolve needs both fit_t_lo and fit_t_hi or neither");
    const double fit_lo = cfg.get_double("evolve", "fit_t_lo", 0.0);
    const double fit_hi = cfg.get_double("evolve", "fit_t_hi", 0.0);
    cfg.require_all_used();

    const LinearMode mode = realize_mode(st, mode_index);
    PerturbationField init;
    init.phi1 = T1_0 * mode.phi1;
    init.phi2 = T2_0 * mode.phi2;
    PerturbationTrajectory traj =
        evolve_linearized(st, init, dt, steps, scheme, record_every, snapshot_every);

    ensure_dir(out_dir);
    write_with_manifest(out_path(out_dir, traj_name), cfg, trajectory_csv(traj));
    write_field_snapshots(cfg, out_dir, st.grid, traj.snapshots);
    std::printf("mode_index = %d\n", mode_index);
    std::printf("product_eigenvalue = %s\n", format_double(mode.product_eigenvalue).c_str());
    std::printf("final_norm_phi1 = %s\n", format_double(traj.norm_phi1.back()).c_str());
    std::printf("final_norm_phi2 = %s\n", format_double(traj.norm_phi2.back()).c_str());
    if (has_lo) {
      const GrowthFit fit = growth_rate(traj, fit_lo, fit_hi);
      std::printf("fit_rate = %s\n", format_double(fit.rate).c_str());
      std::printf("fit_residual = %s\n", format_double(fit.fit_residual).c_str());
      std::printf("fit_low_confidence = %d\n", fit.low_confidence ? 1 : 0);
    }
    std::printf("trajectory -> %s\n", out_path(out_dir, traj_name).c_str());
    return 0;
  }

  if (kind != "gpe")
    throw ConfigError("evolve.kind = '" + kind + "' (expected linearized or gpe)");
  const double dt = cfg.get_double("evolve", "dt", 0.0);
  if (!(dt > 0.0)) throw ConfigError("evolve.dt must be positive for kind = gpe");
  const int steps = steps_from_config(cfg, "evolve", dt);
  cfg.require_all_used();

  const Eigen::VectorXcd psi0 = st.R.cast<std::complex<double>>();
  const GpeTrajectory traj =
      evolve_gpe(psi0, st.potential, st.g1, st.grid, dt, steps, record_every, snapshot_every);

  ensure_dir(out_dir);
  write_with_manifest(out_path(out_dir, traj_name), cfg, gpe_trajectory_csv(traj));
  for (size_t i = 0; i < traj.snapshots.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "snap_%04zu.csv", i);
    std::string body = "# time = " + format_double(traj.snapshot_times[i]) + "\nx,re,im,abs\n";
    for (int j = 0; j < st.grid.n; ++j)
      body += format_double(st.grid.x[j]) + "," + format_double(traj.snapshots[i][j].real()) +
              "," + format_double(traj.snapshots[i][j].imag()) + "," +
              format_double(std::abs(traj.snapshots[i][j])) + "\n";
    write_with_manifest(out_path(out_dir, name), cfg, body);
  }
  double drift = 0.0;
  for (double v : traj.norm) drift = std::max(drift, std::abs(v - traj.norm.front()));
  std::printf("completed = %d\n", traj.completed ? 1 : 0);
  std::printf("last_valid_time = %s\n", format_double(traj.last_valid_time).c_str());
  std::printf("norm_drift = %s\n", format_double(drift / traj.norm.front()).c_str());
  std::printf("trajectory -> %s\n", out_path(out_dir, traj_name).c_str());
  return 0;
}

int cmd_control(const Config& cfg, const std::string& out_dir) {
  const std::string state_path = cfg.require_string("input", "state");
  const int mode_index = cfg.get_int("control", "mode_index", 0);
  const std::string variant_name = cfg.require_string("control", "variant");
  ControlVariant variant;
  if (variant_name == "suppressed") variant = ControlVariant::Suppressed;
  else if (variant_name == "unsuppressed") variant = ControlVariant::Unsuppressed;
  else if (variant_name == "sign_split") variant = ControlVariant::SignSplit;
  else
    throw ConfigError("control.variant = '" + variant_name +
                      "' (expected suppressed, unsuppressed, or sign_split)");
  ControlOptions opt;
  opt.dt = cfg.get_double("control", "dt", 0.0);
  opt.t_end = cfg.get_double("control", "t_end", 0.0);
  const std::string report_name = cfg.get_string("output", "report", "control_report.txt");
  const std::string controlled_name = cfg.get_string("output", "controlled", "controlled.csv");
  const std::string baseline_name = cfg.get_string("output", "baseline", "baseline.csv");
  cfg.require_all_used();

  const StationaryState st = load_state(state_path);
  const ControlExperimentReport rep = control_experiment(st, mode_index, variant, opt);

  ensure_dir(out_dir);
  const std::string text = control_report_text(rep);
  write_with_manifest(out_path(out_dir, report_name), cfg, text);
  write_with_manifest(out_path(out_dir, controlled_name), cfg, trajectory_csv(rep.controlled));
  write_with_manifest(out_path(out_dir, baseline_name), cfg, trajectory_csv(rep.baseline));
  std::fputs(text.c_str(), stdout);
  return 0;
}

int cmd_sweep(const Config& cfg, const std::string& out_dir) {
  SweepPlan plan;
  for (const std::string& text : cfg.get_all("sweep", "axis")) {
    const std::vector<std::string> tok = split_tokens(text);
    const std::string context = "sweep axis '" + text + "'";
    if (tok.size() < 2) throw ConfigError(context + ": expected '<name> lin lo hi count' or '<name> vals v1 ...'");
    SweepAxis axis;
    axis.name = tok[0];
    if (tok[1] == "lin") {
      if (tok.size() != 5) throw ConfigError(context + ": lin takes exactly lo hi count");
      const double lo = parse_number(tok[2], context);
      const double hi = parse_number(tok[3], context);
      const double cnt = parse_number(tok[4], context);
      const int count = static_cast<int>(cnt);
      if (cnt != count || count < 2) throw ConfigError(context + ": count must be an integer >= 2");
      for (int i = 0; i < count; ++i)
        axis.values.push_back(lo + (hi - lo) * i / (count - 1));
    } else if (tok[1] == "vals") {
      if (tok.size() < 3) throw ConfigError(context + ": vals needs at least one value");
      for (size_t i = 2; i < tok.size(); ++i) axis.values.push_back(parse_number(tok[i], context));
    } else {
      throw ConfigError(context + ": unknown form '" + tok[1] + "' (expected lin or vals)");
    }
    plan.axes.push_back(std::move(axis));
  }

  plan.base.V0 = cfg.get_double("sweep", "V0", plan.base.V0);
  plan.base.k = cfg.get_double("sweep", "k", plan.base.k);
  plan.base.g1 = cfg.get_double("sweep", "g1", plan.base.g1);
  if (cfg.has("sweep", "mu")) plan.base.mu = cfg.require_double("sweep", "mu");
  if (cfg.has("sweep", "N")) plan.base.N = cfg.require_double("sweep", "N");
  plan.settings.grid_n = cfg.get_int("sweep", "grid_n", plan.settings.grid_n);
  plan.settings.periods = cfg.get_int("sweep", "periods", plan.settings.periods);
  plan.settings.lap =
      laplacian_kind_from_name(cfg.get_string("sweep", "laplacian", "spectral"));
  plan.settings.newton_tol = cfg.get_double("sweep", "newton_tol", plan.settings.newton_tol);
  plan.settings.newton_max_iter =
      cfg.get_int("sweep", "newton_max_iter", plan.settings.newton_max_iter);
  if (cfg.has("sweep", "classifier_eps"))
    plan.settings.classifier_eps = cfg.require_double("sweep", "classifier_eps");
  plan.settings.source = cfg.get_string("sweep", "source", plan.settings.source);
  plan.settings.n_lattice = cfg.get_int("sweep", "n_lattice", plan.settings.n_lattice);
  plan.settings.max_points = cfg.get_int("sweep", "max_points", plan.settings.max_points);
  plan.settings.workers = cfg.get_int("sweep", "workers", plan.settings.workers);
  const std::string csv_name = cfg.get_string("output", "csv", "sweep.csv");
  cfg.require_all_used();

  const std::vector<SweepRecord> records = run_sweep(plan);

  ensure_dir(out_dir);
  std::string body = sweep_csv_header() + "\n";
  int n_ok = 0;
  for (const SweepRecord& rec : records) {
    body += sweep_csv_row(rec) + "\n";
    n_ok += rec.status == "ok";
  }
  write_with_manifest(out_path(out_dir, csv_name), cfg, body);
  std::printf("points = %zu\n", records.size());
  std::printf("ok = %d\n", n_ok);
  std::printf("csv -> %s\n", out_path(out_dir, csv_name).c_str());
  return 0;
}

// elliptic-check: self-contained identity suite over a modulus ladder; any
// deviation beyond tolerance is a numeric failure (exit 3).
int cmd_elliptic_check(const Config& cfg, const std::string& out_dir, bool have_config) {
  const double tol = cfg.get_double("elliptic", "tol", 5e-13);
  const int nx = cfg.get_int("elliptic", "x_samples", 41);
  const double x_max = cfg.get_double("elliptic", "x_max", 10.0);
  if (have_config) cfg.require_all_used();

  const std::vector<double> moduli = {0.0,  1e-6, 0.05, 0.2,  0.35, 0.5,
                                      0.65, 0.8,  0.9,  0.99, 0.999999, 1.0};
  std::string report;
  bool all_ok = true;
  auto check = [&](const std::string& name, double dev, double bound) {
    const bool ok = dev <= bound;
    all_ok = all_ok && ok;
    report += std::string(ok ? "ok   " : "FAIL ") + name + " max_dev=" + format_double(dev) +
              " tol=" + format_double(bound) + "\n";
  };

  check("K(0) = pi/2", std::abs(complete_K(0.0) - std::numbers::pi / 2.0), 1e-15);

  double pyth = 0.0, circ = 0.0, quarter = 0.0, wrap = 0.0, deriv = 0.0, hyper = 0.0;
  for (double k : moduli) {
    for (int i = 0; i < nx; ++i) {
      const double x = -x_max + 2.0 * x_max * i / (nx - 1);
      const JacobiTriple j = jacobi_sn_cn_dn(x, k);
      pyth = std::max(pyth, std::abs(j.sn * j.sn + j.cn * j.cn - 1.0));
      pyth = std::max(pyth, std::abs(j.dn * j.dn + k * k * j.sn * j.sn - 1.0));
      if (k == 0.0) {
        circ = std::max(circ, std::abs(j.sn - std::sin(x)));
        circ = std::max(circ, std::abs(j.cn - std::cos(x)));
      }
      if (k == 1.0) hyper = std::max(hyper, std::abs(j.sn - std::tanh(x)));
      const double h = 1e-5;
      const double ds =
          (jacobi_sn_cn_dn(x + h, k).sn - jacobi_sn_cn_dn(x - h, k).sn) / (2.0 * h);
      deriv = std::max(deriv, std::abs(ds - j.cn * j.dn));
    }
    if (k < 1.0) {
      const double K = complete_K(k);
      const JacobiTriple q = jacobi_sn_cn_dn(K, k);
      quarter = std::max(quarter, std::abs(q.sn - 1.0));
      quarter = std::max(quarter, std::abs(q.cn));
      quarter = std::max(quarter, std::abs(q.dn - std::sqrt(1.0 - k * k)));
      const JacobiTriple w = jacobi_sn_cn_dn(1.3 + 4.0 * K, k);
      const JacobiTriple w0 = jacobi_sn_cn_dn(1.3, k);
      wrap = std::max(wrap, std::abs(w.sn - w0.sn));
    }
  }
  check("sn^2 + cn^2 = 1 and dn^2 + k^2 sn^2 = 1", pyth, tol);
  check("k = 0 reduces to sin/cos", circ, tol);
  check("k = 1 reduces to tanh", hyper, tol);
  check("quarter period values at K(k)", quarter, 5e-11);
  check("periodicity sn(x + 4K) = sn(x)", wrap, 5e-11);
  check("d/dx sn = cn dn (central difference)", deriv, 1e-7);

  ensure_dir(out_dir);
  const std::string path = out_path(out_dir, "elliptic_check.txt");
  write_text_file(path, manifest_line(have_config ? cfg.raw_text() : "") + "\n" + report);
  std::fputs(report.c_str(), stdout);
  std::printf("report -> %s\n", path.c_str());
  return all_ok ? 0 : 3;
}

const char* kFooter =
    "Output formats (see FORMATS.md):\n"
    "  state file      self-describing text, loadable by classify/evolve/control\n"
    "  verdict.csv     mu,g1,classification,alpha_g,beta_g,min_product_re,has_complex,\n"
    "                  lambda_growth,mu_s,band_lo,band_hi\n"
    "  trajectory.csv  time,norm_phi1,norm_phi2 (linearized) or time,norm,energy (gpe)\n"
    "  sweep.csv       V0,k,g1,mu_param,N_param,status,verdict,mu,mu_s,abs_mu_minus_mu_s,\n"
    "                  alpha_g,beta_g,min_product_re,has_complex,lambda_growth,band_lo,band_hi\n"
    "Every generated file starts with '# gpelab <version> config=<hash>'.\n"
    "Exit codes: 0 success, 1 configuration error, 2 no convergence, 3 numeric failure.";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stationary states, stability spectra, and evolution for the "
               "quasi-1D Gross-Pitaevskii equation"};
  app.footer(kFooter);
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  auto add = [&](const std::string& name, const std::string& desc, bool config_required) {
    CLI::App* sub = app.add_subcommand(name, desc);
    auto* opt = sub->add_option("--config", config_path, "Run configuration (INI)");
    if (config_required) opt->required();
    sub->add_option("--out", out_dir, "Output directory, created if missing");
    return sub;
  };
  CLI::App* solve = add("solve", "Compute a stationary state and serialize it", true);
  CLI::App* classify_cmd = add("classify", "Stability verdict for a stored state", true);
  CLI::App* evolve = add("evolve", "Integrate the linearized pair or the full equation", true);
  CLI::App* control = add("control", "Run a controlled/baseline mode experiment", true);
  CLI::App* sweep = add("sweep", "Map a parameter region to a CSV of verdicts", true);
  CLI::App* elliptic = add("elliptic-check", "Verify the elliptic-function kernel", false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    Config cfg;
    const bool have_config = !config_path.empty();
    if (have_config) cfg = Config::parse_file(config_path);
    if (solve->parsed()) return cmd_solve(cfg, out_dir);
    if (classify_cmd->parsed()) return cmd_classify(cfg, out_dir);
    if (evolve->parsed()) return cmd_evolve(cfg, out_dir);
    if (control->parsed()) return cmd_control(cfg, out_dir);
    if (sweep->parsed()) return cmd_sweep(cfg, out_dir);
    if (elliptic->parsed()) return cmd_elliptic_check(cfg, out_dir, have_config);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const NonconvergenceError& e) {
    std::fprintf(stderr, "no convergence: %s (last residual %s)\n", e.what(),
                 format_double(e.last_residual).c_str());
    return 2;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 3;
  }
  return 0;
}
