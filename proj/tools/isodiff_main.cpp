// Experiment harness: config-driven subcommands emitting flat text tables.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "isodiff/angles.hpp"
#include "isodiff/config.hpp"
#include "isodiff/diffusion.hpp"
#include "isodiff/errors.hpp"
#include "isodiff/melnikov.hpp"
#include "isodiff/parallel.hpp"
#include "isodiff/splitting.hpp"
#include "isodiff/three_scales.hpp"
#include "isodiff/torus.hpp"

namespace fs = std::filesystem;
using namespace isodiff;

namespace {

struct Common {
  std::string config_path;
  std::string out = ".";
  int workers = 1;
  std::uint64_t seed = 0;
  double budget = 3600;
};

FrequencyVector make_frequency(const Config& cfg) {
  const double gamma = cfg.get_double("system.gamma", 0.0);
  const double tau = cfg.get_double("system.tau", 0.0);
  if (cfg.has("system.eps"))
    return FrequencyVector::three_scales(cfg.get_double("system.eps"),
                                         cfg.get_double("system.a", 1.0), gamma,
                                         tau);
  FrequencyVector fv;
  fv.omega = cfg.get_doubles("system.omega");
  fv.gamma = gamma;
  fv.tau = tau;
  return fv;
}

PerturbationSeries make_series(const Config& cfg) {
  if (cfg.has("perturbation.file"))
    return PerturbationSeries::load_file(cfg.get_string("perturbation.file"));
  PerturbationSeries f;
  f.n = static_cast<int>(cfg.get_int("system.n"));
  const std::string qm = cfg.get_string("perturbation.q_mode", "factor");
  if (qm == "factor")
    f.q_mode = PerturbationSeries::QMode::FactorOneMinusCosQ;
  else if (qm == "general")
    f.q_mode = PerturbationSeries::QMode::GeneralInQ;
  else
    throw ConfigError("perturbation.q_mode must be factor or general");
  auto add = [&](const std::string& prefix, bool cos_mode) {
    for (int i = 1;; ++i) {
      const std::string key = "perturbation." + prefix + std::to_string(i);
      if (!cfg.has(key)) break;
      const auto vals = cfg.get_doubles(key);
      if (static_cast<int>(vals.size()) != f.key_len() + 1)
        throw ConfigError(key + ": expected " + std::to_string(f.key_len()) +
                          " mode indices and an amplitude");
      ModeKey k(f.key_len());
      for (int j = 0; j < f.key_len(); ++j)
        k[j] = static_cast<int>(std::lround(vals[j]));
      if (cos_mode)
        f.add_cos(k, vals.back());
      else
        f.add_sin(k, vals.back());
    }
  };
  add("cos", true);
  add("sin", false);
  if (f.coeffs.empty()) throw ConfigError("perturbation: no modes given");
  if (cfg.has("perturbation.widths")) {
    f.widths = cfg.get_doubles("perturbation.widths");
    if (static_cast<int>(f.widths.size()) != f.n)
      throw ConfigError("perturbation.widths: need one width per angle");
  }
  return f;
}

OrbitOptions make_orbit_options(const Config& cfg) {
  OrbitOptions o;
  o.tol = cfg.get_double("solver.tol", o.tol);
  o.h = cfg.get_double("solver.h", o.h);
  o.T_cut = cfg.get_double("solver.T_cut", o.T_cut);
  o.max_iter = static_cast<int>(cfg.get_int("solver.max_iter", o.max_iter));
  return o;
}

std::vector<int> make_shape(const Config& cfg, int n, int fallback) {
  std::vector<long> def(n, fallback);
  const auto s = cfg.get_ints("experiment.shape", def);
  std::vector<int> shape(s.begin(), s.end());
  if (static_cast<int>(shape.size()) == 1 && n > 1)
    shape.assign(n, shape[0]);
  if (static_cast<int>(shape.size()) != n)
    throw ConfigError("experiment.shape: need one entry per angle");
  return shape;
}

std::ofstream open_out(const Config& cfg, const fs::path& dir,
                       const std::string& name) {
  fs::create_directories(dir);
  std::ofstream os(dir / name);
  if (!os) throw ConfigError("cannot write " + (dir / name).string());
  os << output_header(cfg);
  return os;
}

void write_mode_key(std::ostream& os, const ModeKey& k) {
  for (int v : k) os << v << " ";
}

// Melnikov-primitive grid evaluated cell by cell.
HomoclinicGrid gamma_grid(const FrequencyVector& omega,
                          const PerturbationSeries& f,
                          const std::vector<int>& shape, bool general,
                          int workers) {
  HomoclinicGrid grid;
  grid.kind = general ? GridKind::MelnikovM : GridKind::MelnikovGamma;
  grid.mu = 0;
  grid.shape = shape;
  std::size_t total = 1;
  for (int s : shape) total *= static_cast<std::size_t>(s);
  grid.values.assign(total, 0.0);
  grid.meta = "-";
  parallel_for(total, workers, [&](std::size_t flat) {
    std::vector<int> idx(shape.size());
    std::size_t rem = flat;
    for (int d = static_cast<int>(shape.size()) - 1; d >= 0; --d) {
      idx[d] = static_cast<int>(rem % shape[d]);
      rem /= shape[d];
    }
    const auto A = grid.angle(idx);
    grid.values[flat] = general ? melnikov_general(A, omega, f)
                                : melnikov_primitive(A, omega, f);
  });
  return grid;
}

int cmd_melnikov(const Config& cfg, const Common& c) {
  const auto omega = make_frequency(cfg);
  const auto f = make_series(cfg);
  const auto shape = make_shape(cfg, omega.n(), 32);
  const bool general = f.q_mode == PerturbationSeries::QMode::GeneralInQ;

  const auto grid = gamma_grid(omega, f, shape, general, c.workers);
  {
    auto os = open_out(cfg, c.out, general ? "m_grid.txt" : "gamma_grid.txt");
    grid.save(os);
  }
  if (!general) {
    auto os = open_out(cfg, c.out, "gamma_modes.txt");
    os << "# k... re im\n";
    for (const auto& [k, v] : melnikov_coefficients(omega, f)) {
      write_mode_key(os, k);
      os << fmt(v.real()) << " " << fmt(v.imag()) << "\n";
    }
  }
  return 0;
}

int cmd_homoclinic(const Config& cfg, const Common& c) {
  const auto omega = make_frequency(cfg);
  const auto f = make_series(cfg);
  const auto shape = make_shape(cfg, omega.n(), 16);
  const double mu = cfg.get_double("experiment.mu");
  const auto opts = make_orbit_options(cfg);

  std::string kinds_s = cfg.get_string("experiment.kinds", "glued");
  for (auto& ch : kinds_s)
    if (ch == ',') ch = ' ';
  std::istringstream ks(kinds_s);
  std::vector<GridKind> kinds;
  for (std::string w; ks >> w;) kinds.push_back(grid_kind_from_string(w));
  if (kinds.empty()) throw ConfigError("experiment.kinds: empty");

  auto cmp = open_out(cfg, c.out, "fourier_compare.txt");
  cmp << "# kind k... |G_k| |mu Gamma_k| deviation\n";
  const auto gk = melnikov_coefficients(omega, f);
  for (const auto kind : kinds) {
    const auto grid =
        compute_homoclinic_grid(kind, mu, omega, f, shape, opts, c.workers);
    {
      auto os = open_out(cfg, c.out, to_string(kind) + "_grid.txt");
      grid.save(os);
    }
    for (const auto& [k, v] : fourier_of_grid(grid).coeffs) {
      Complex g{0, 0};
      if (auto it = gk.find(k); it != gk.end()) g = it->second;
      const bool zero =
          std::all_of(k.begin(), k.end(), [](int x) { return x == 0; });
      if (zero) continue;
      cmp << to_string(kind) << " ";
      write_mode_key(cmp, k);
      cmp << fmt(std::abs(v)) << " " << fmt(std::abs(mu * g)) << " "
          << fmt(std::abs(v - mu * g)) << "\n";
    }
  }
  return 0;
}

HomoclinicGrid synthetic_bowl(const Config& cfg, int n) {
  HomoclinicGrid grid;
  grid.kind = GridKind::Glued;
  grid.mu = 0;
  std::vector<long> def(n, 64);
  const auto s = cfg.get_ints("experiment.shape", def);
  grid.shape.assign(s.begin(), s.end());
  const std::vector<double> center =
      cfg.get_doubles("experiment.A0", std::vector<double>(n, std::numbers::pi));
  std::size_t total = 1;
  for (int m : grid.shape) total *= static_cast<std::size_t>(m);
  grid.values.assign(total, 0.0);
  grid.meta = "synthetic-bowl";
  std::vector<int> idx(n, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    const auto A = grid.angle(idx);
    double d2 = 0;
    for (int j = 0; j < n; ++j) {
      const double dj = circle_dist(A[j], center[j]);
      d2 += dj * dj;
    }
    grid.values[flat] = d2;
    for (int d = n - 1; d >= 0; --d) {
      if (++idx[d] < grid.shape[d]) break;
      idx[d] = 0;
    }
  }
  return grid;
}

void write_splitting_report(std::ostream& os, const SplittingReport& r) {
  os << "A0 =";
  for (double a : r.window.A0) os << " " << fmt(a);
  os << "\nrho = " << fmt(r.window.rho) << "\nalpha = " << fmt(r.window.alpha)
     << "\ndelta = " << fmt(r.window.delta) << "\ncond_i = " << r.cond_i
     << "\ncond_ii = " << r.cond_ii << "\ncond_iii = " << r.cond_iii
     << "\nmargin_i = " << fmt(r.margin_i)
     << "\nmargin_ii = " << fmt(r.margin_ii)
     << "\nmargin_iii = " << fmt(r.margin_iii)
     << "\ninf_ball = " << fmt(r.inf_ball)
     << "\ninf_boundary = " << fmt(r.inf_boundary)
     << "\nsup_inner = " << fmt(r.sup_inner)
     << "\nsublevel_gap = " << fmt(r.sublevel_gap)
     << "\nall_pass = " << r.all_pass() << "\n";
}

int cmd_splitting(const Config& cfg, const Common& c) {
  HomoclinicGrid grid;
  if (cfg.get_string("experiment.synthetic", "") == "bowl") {
    grid = synthetic_bowl(cfg, static_cast<int>(cfg.get_int("system.n", 2)));
  } else if (cfg.has("experiment.grid_file")) {
    std::ifstream is(cfg.get_string("experiment.grid_file"));
    if (!is)
      throw ConfigError("cannot open " + cfg.get_string("experiment.grid_file"));
    grid = HomoclinicGrid::load(is);
  } else {
    throw ConfigError("splitting: need experiment.synthetic=bowl or grid_file");
  }

  SplittingOptions sopts;
  sopts.allow_coarse = cfg.get_bool("experiment.allow_coarse", false);
  sopts.refine =
      static_cast<int>(cfg.get_int("experiment.refine", sopts.refine));

  const auto minimum = find_minimum(grid);
  auto os = open_out(cfg, c.out, "splitting_report.txt");
  os << "minimum_A0 =";
  for (double a : minimum.A0) os << " " << fmt(a);
  os << "\nminimum_value = " << fmt(minimum.value) << "\nhessian_eigenvalues =";
  for (double e : minimum.hessian_eigenvalues) os << " " << fmt(e);
  os << "\nnondegenerate = " << minimum.nondegenerate << "\n";

  if (cfg.has("experiment.rho")) {
    SplittingWindow w;
    w.A0 = cfg.get_doubles("experiment.A0", minimum.A0);
    w.rho = cfg.get_double("experiment.rho");
    w.alpha = cfg.get_double("experiment.alpha");
    w.delta = cfg.get_double("experiment.delta");
    write_splitting_report(os, check_splitting_condition(grid, w, sopts));
  } else {
    const auto search =
        suggest_window_from_minimum(grid, minimum.A0, grid.mu, sopts);
    os << "feasible = " << search.feasible << "\n";
    if (search.feasible)
      write_splitting_report(os, search.report);
    else
      os << "note = " << search.note << "\n";
  }
  return 0;
}

ThreeScalesOptions make_3ts_options(const Config& cfg, const Common& c) {
  ThreeScalesOptions o;
  o.a = cfg.get_double("system.a", o.a);
  o.mu_coef = cfg.get_double("experiment.mu_coef", o.mu_coef);
  o.mu_pow = cfg.get_double("experiment.mu_pow", o.mu_pow);
  const auto s = cfg.get_ints("experiment.shape", {8, 8});
  o.shape.assign(s.begin(), s.end());
  o.orbit = make_orbit_options(cfg);
  if (!cfg.has("solver.h")) o.orbit.h = 0.01;
  o.workers = c.workers;
  o.window_shape =
      static_cast<int>(cfg.get_int("experiment.window_shape", o.window_shape));
  o.window_rho = cfg.get_double("experiment.window_rho", o.window_rho);
  o.window_refine = static_cast<int>(
      cfg.get_int("experiment.window_refine", o.window_refine));
  o.window_orbit_h =
      cfg.get_double("experiment.window_orbit_h", o.window_orbit_h);
  return o;
}

int cmd_threescales(const Config& cfg, const Common& c) {
  const auto f = make_series(cfg);
  const auto opts = make_3ts_options(cfg, c);
  const auto eps_list = cfg.get_doubles("experiment.eps_list");
  const auto rep = three_timescale_analysis(eps_list, f, opts);

  {
    auto os = open_out(cfg, c.out, "threescales.csv");
    os << "eps,mu,coef1,gamma1,rescaled,r0,r1,below_floor,slope\n";
    for (const auto& pt : rep.points)
      os << fmt(pt.eps) << "," << fmt(pt.mu) << "," << fmt(pt.coef1) << ","
         << fmt(pt.gamma1) << "," << fmt(pt.rescaled) << "," << fmt(pt.r0)
         << "," << fmt(pt.r1) << "," << pt.below_floor << "," << fmt(rep.slope)
         << "\n";
  }
  {
    auto os = open_out(cfg, c.out, "threescales_report.txt");
    os << "slope = " << fmt(rep.slope)
       << "\nslope_gamma = " << fmt(rep.slope_gamma)
       << "\nintercept = " << fmt(rep.intercept)
       << "\ntarget = " << fmt(rep.target) << "\nused = " << rep.used << "\n";
  }
  if (cfg.has("experiment.window_eps")) {
    const double eps = cfg.get_double("experiment.window_eps");
    const auto res = check_3ts_window(
        eps, opts.mu_of(eps), f, cfg.get_double("experiment.cbar", 0.5),
        cfg.get_double("experiment.c", 1.0), cfg.get_double("experiment.d", 1.0),
        opts);
    auto os = open_out(cfg, c.out, "threescales_window.txt");
    os << "feasible = " << res.feasible << "\nhyp_gamma1 = " << res.hyp_gamma1
       << "\nhyp_gamma0 = " << res.hyp_gamma0 << "\nviolated = "
       << (res.violated.empty() ? "-" : res.violated)
       << "\nA2_bar = " << fmt(res.A2_bar)
       << "\ngamma1_min = " << fmt(res.gamma1_min)
       << "\ngamma1_required = " << fmt(res.gamma1_required)
       << "\ngamma0_rise = " << fmt(res.gamma0_rise) << "\n";
    if (res.hyp_gamma1 && res.hyp_gamma0) write_splitting_report(os, res.report);
  }
  return 0;
}

int cmd_diffuse(const Config& cfg, const Common& c) {
  const auto omega = make_frequency(cfg);
  const auto f = make_series(cfg);
  const std::vector<double> I0 = cfg.get_doubles("experiment.I0");
  const std::vector<double> I1 = cfg.get_doubles("experiment.I1");
  const double eta = cfg.get_double("experiment.eta");
  std::vector<double> mu_list;
  if (cfg.has("experiment.mu_list"))
    mu_list = cfg.get_doubles("experiment.mu_list");
  else
    mu_list = {cfg.get_double("experiment.mu")};

  SplittingWindow window;
  if (cfg.has("experiment.A0")) {
    window.A0 = cfg.get_doubles("experiment.A0");
  } else {
    // steer around the Melnikov minimum
    const auto grid = gamma_grid(omega, f, make_shape(cfg, omega.n(), 64),
                                 false, c.workers);
    window.A0 = find_minimum(grid).A0;
  }
  window.rho = cfg.get_double("experiment.rho", 1.5);
  window.alpha = cfg.get_double("experiment.alpha", 0.2);
  window.delta = cfg.get_double("experiment.delta", 0.1);

  ChainOptions copts;
  copts.dt = cfg.get_double("solver.dt", copts.dt);
  copts.t_max = cfg.get_double("experiment.t_max", copts.t_max);
  copts.checkpoint_dt =
      cfg.get_double("experiment.checkpoint_dt", copts.checkpoint_dt);
  copts.budget = c.budget;

  std::vector<DiffusionRun> runs(mu_list.size());
  parallel_for(mu_list.size(), c.workers, [&](std::size_t i) {
    runs[i] = run_transition_chain(I0, I1, mu_list[i], omega, f, window, eta,
                                   c.seed + i, copts);
  });

  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& run = runs[i];
    auto os = open_out(cfg, c.out, "diffuse_run_" + std::to_string(i) + ".csv");
    os << "# row,t,... (cp: t then I; tr: t_start t_end crossed then A then dI)\n";
    for (const auto& cp : run.checkpoints) {
      os << "cp," << fmt(cp.t);
      for (double v : cp.I) os << "," << fmt(v);
      os << "\n";
    }
    for (const auto& tr : run.transitions) {
      os << "tr," << fmt(tr.t_start) << "," << fmt(tr.t_end) << ","
         << tr.crossed;
      for (double v : tr.A) os << "," << fmt(v);
      for (double v : tr.dI) os << "," << fmt(v);
      os << "\n";
    }
  }

  const auto scaling = scaling_study(runs);
  {
    auto os = open_out(cfg, c.out, "diffuse_summary.txt");
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const auto& run = runs[i];
      os << "run " << i << ": mu = " << fmt(run.mu) << " seed = " << run.seed
         << " T_d = " << (run.T_d ? fmt(*run.T_d) : std::string("none"))
         << " transitions = " << run.transitions.size()
         << " final_dist = " << fmt(run.final_dist) << " stop = "
         << run.stop_reason << "\n";
    }
    os << "C_fit = " << fmt(scaling.C_fit) << "\nspread = "
       << fmt(scaling.spread) << "\n";
    double dI_norm = 0;
    for (std::size_t j = 0; j < I0.size(); ++j)
      dI_norm += (I1[j] - I0[j]) * (I1[j] - I0[j]);
    dI_norm = std::sqrt(dI_norm);
    const double tau = cfg.get_double("system.tau", 2.0);
    for (const auto& pt : scaling.points) {
      if (!pt.complete) continue;
      const auto bound = diffusion_time_bound(dI_norm, window, tau, eta,
                                              std::max(scaling.C_fit, 1e-300));
      os << "bound mu = " << fmt(pt.mu) << " T_d = " << fmt(pt.T_d)
         << " bound = " << fmt(bound.total) << "\n";
    }
    for (const auto& note : scaling.notices) os << "notice: " << note << "\n";
  }
  for (const auto& run : runs)
    if (run.budget_exhausted) return 4;
  return 0;
}

int cmd_torus(const Config& cfg, const Common& c) {
  const auto omega = make_frequency(cfg);
  const auto f = make_series(cfg);
  const int K = static_cast<int>(cfg.get_int("solver.K_modes", 8));
  TorusOptions topts;
  topts.tol = cfg.get_double("solver.tol", topts.tol);
  std::vector<double> mu_list;
  if (cfg.has("experiment.mu_list"))
    mu_list = cfg.get_doubles("experiment.mu_list");
  else
    mu_list = {cfg.get_double("experiment.mu")};

  std::vector<InvariantTorus> tori(mu_list.size());
  parallel_for(mu_list.size(), c.workers, [&](std::size_t i) {
    tori[i] = solve_invariant_torus(mu_list[i], omega, f, K, topts);
  });

  auto os = open_out(cfg, c.out, "torus_summary.txt");
  os << "# mu sup_Q sup_P sup_a energy residual\n";
  for (const auto& torus : tori)
    os << fmt(torus.mu) << " " << fmt(torus.sup_Q()) << " "
       << fmt(torus.sup_P()) << " " << fmt(torus.sup_a()) << " "
       << fmt(torus.energy) << " " << fmt(torus.invariance_residual) << "\n";
  for (std::size_t i = 0; i < tori.size(); ++i) {
    auto ms = open_out(cfg, c.out, "torus_modes_" + std::to_string(i) + ".txt");
    ms << "# field [component] k... re im\n";
    for (const auto& [k, v] : tori[i].Qhat) {
      ms << "Q ";
      write_mode_key(ms, k);
      ms << fmt(v.real()) << " " << fmt(v.imag()) << "\n";
    }
    for (const auto& [k, v] : tori[i].Phat) {
      ms << "P ";
      write_mode_key(ms, k);
      ms << fmt(v.real()) << " " << fmt(v.imag()) << "\n";
    }
    for (const auto& [k, vec] : tori[i].ahat)
      for (std::size_t j = 0; j < vec.size(); ++j) {
        ms << "a " << j << " ";
        write_mode_key(ms, k);
        ms << fmt(vec[j].real()) << " " << fmt(vec[j].imag()) << "\n";
      }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shadowing and splitting analysis for isochronous systems"};
  app.require_subcommand(1);
  app.fallthrough();

  Common c;
  app.add_option("--config", c.config_path, "configuration file")->required();
  app.add_option("--out", c.out, "output directory");
  app.add_option("--workers", c.workers, "worker threads");
  app.add_option("--seed", c.seed, "random seed");
  app.add_option("--budget", c.budget, "wall-clock budget in seconds");

  auto* melnikov = app.add_subcommand("melnikov", "Melnikov grids and modes");
  auto* homoclinic = app.add_subcommand("homoclinic", "homoclinic grids");
  auto* splitting = app.add_subcommand("splitting", "splitting condition");
  auto* threescales = app.add_subcommand("threescales", "three-scale sweep");
  auto* diffuse = app.add_subcommand("diffuse", "transition-chain runs");
  auto* torus = app.add_subcommand("torus", "invariant torus solve");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const Config cfg = Config::load_file(c.config_path);
    if (melnikov->parsed()) return cmd_melnikov(cfg, c);
    if (homoclinic->parsed()) return cmd_homoclinic(cfg, c);
    if (splitting->parsed()) return cmd_splitting(cfg, c);
    if (threescales->parsed()) return cmd_threescales(cfg, c);
    if (diffuse->parsed()) return cmd_diffuse(cfg, c);
    if (torus->parsed()) return cmd_torus(cfg, c);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  }
}
