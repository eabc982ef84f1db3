// Command-line front end: simulate shot-noise data for a known state,
// reconstruct a state from saved data, run a full noise-ladder study, or
// run the built-in self checks.

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qtomo/data_fidelity.hpp"
#include "qtomo/forward_model.hpp"
#include "qtomo/io.hpp"
#include "qtomo/kernels.hpp"
#include "qtomo/qre.hpp"
#include "qtomo/random.hpp"
#include "qtomo/solvers.hpp"
#include "qtomo/special_functions.hpp"
#include "qtomo/states.hpp"
#include "qtomo/study.hpp"

namespace {

using namespace qtomo;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct CommonOpts {
  ExperimentConfig cfg = pinem_preset();
  std::string experiment = "pinem";
  std::string fidelity = "l2";
  std::string variant = "semi";
  CLI::Option* dim_opt = nullptr;
  CLI::Option* ntheta_opt = nullptr;
};

void add_model_options(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--experiment", o.experiment,
                  "measurement type: pinem or homodyne")
      ->check(CLI::IsMember({"pinem", "homodyne"}));
  o.dim_opt = cmd->add_option("--dim", o.cfg.dim,
                              "Hilbert space dimension (odd for pinem)");
  o.ntheta_opt =
      cmd->add_option("--n-theta", o.cfg.n_theta, "number of phase samples");
  cmd->add_option("--n-bins", o.cfg.n_bins, "homodyne histogram bins");
  cmd->add_option("--x-min", o.cfg.x_min, "homodyne window lower edge");
  cmd->add_option("--x-max", o.cfg.x_max, "homodyne window upper edge");
  cmd->add_option("--g-pump", o.cfg.g_pump, "pump coupling of the true state");
  cmd->add_option("--g-probe", o.cfg.g_probe, "measurement coupling");
  cmd->add_option("--cat-amplitude", o.cfg.cat_amplitude,
                  "cat size of the homodyne true state");
  cmd->add_option("--jitter-sigma", o.cfg.jitter_sigma,
                  "phase jitter of the pump");
  cmd->add_option("--jitter-samples", o.cfg.jitter_samples,
                  "pure states mixed into the jittered truth");
  cmd->add_option("--seed", o.cfg.seed, "random seed");
  cmd->add_option("--fidelity", o.fidelity, "data term: l2 or kl")
      ->check(CLI::IsMember({"l2", "kl"}));
  cmd->add_option("--variant", o.variant,
                  "homodyne reconstruction operator: semi or basis")
      ->check(CLI::IsMember({"semi", "basis"}));
  cmd->set_config("--config", "",
                  "read options from a key=value file; flags override it");
}

// The struct defaults carry the pinem preset; swap in the homodyne preset
// geometry for whichever of dim/n-theta the user left untouched.
void finalize(CommonOpts& o) {
  if (o.experiment == "homodyne") {
    const ExperimentConfig h = homodyne_preset();
    if (o.dim_opt->count() == 0) o.cfg.dim = h.dim;
    if (o.ntheta_opt->count() == 0) o.cfg.n_theta = h.n_theta;
  }
  o.cfg.experiment = experiment_from_name(o.experiment);
  o.cfg.fidelity = fidelity_from_name(o.fidelity);
  o.cfg.operator_variant = variant_from_name(o.variant);
}

int cmd_simulate(const ExperimentConfig& cfg, double intensity,
                 const std::string& out_dir) {
  const Problem problem = build_problem(cfg);
  const DataGrid g_exact = problem.data_op().apply(problem.truth);
  const Observation obs =
      poisson_observe(g_exact, intensity, derive_seed(cfg.seed, 0),
                      cfg.fidelity);

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  save_matrix(problem.truth, (dir / "truth.qmat").string());
  save_grid(g_exact, (dir / "g_exact.qgrid").string());
  save_grid(obs.g_obs, (dir / "g_obs.qgrid").string());

  std::cout << "experiment: " << experiment_name(cfg.experiment)
            << "  dim: " << cfg.dim << "  n_theta: " << cfg.n_theta
            << "  channels: " << problem.data_op().n_l() << "\n";
  std::cout << "intensity: " << num(intensity) << "  delta: " << num(obs.delta)
            << "\n";
  std::cout << "wrote " << (dir / "truth.qmat").string() << ", "
            << (dir / "g_exact.qgrid").string() << ", "
            << (dir / "g_obs.qgrid").string() << "\n";
  return 0;
}

int cmd_reconstruct(const ExperimentConfig& cfg, const std::string& data_path,
                    const std::string& truth_path, const std::string& out_path,
                    const SolverConfig& scfg) {
  const Problem problem = build_problem(cfg);
  const ForwardModel& op = problem.recon_op();
  const DataGrid g_obs = load_grid(data_path);

  const HermitianMatrix prior = herm_lincomb(
      1.0 / cfg.dim, HermitianMatrix::identity(cfg.dim), 0.0,
      HermitianMatrix::identity(cfg.dim));
  const QreContext ctx = make_qre_context(prior);

  const SolverReport rep =
      cfg.fidelity == Fidelity::l2
          ? fista_solve(op, g_obs, ctx, scfg)
          : cp_solve(op, g_obs, ctx, cfg.fidelity, scfg);
  save_matrix(rep.solution, out_path);

  std::cout << "solver: "
            << (cfg.fidelity == Fidelity::l2 ? "accelerated proximal gradient"
                                             : "primal-dual")
            << "  alpha: " << num(scfg.alpha) << "\n";
  std::cout << "iterations: " << rep.iterations
            << "  stop: " << stop_reason_name(rep.stop_reason)
            << "  final_gap: " << num(rep.final_gap)
            << "  wall: " << num(rep.wall_time) << "s\n";
  std::cout << "solution trace: " << num(rep.solution.trace()) << "  wrote "
            << out_path << "\n";

  if (!truth_path.empty()) {
    const HermitianMatrix truth = load_matrix(truth_path);
    const double te =
        trace_norm(herm_lincomb(1.0, rep.solution, -1.0, truth));
    const QreContext tctx = make_qre_context(floor_eigenvalues(truth, 1e-10));
    std::cout << "trace_error: " << num(te)
              << "  qkl_to_truth: " << num(qkl_value(rep.solution, tctx))
              << "\n";
  }
  return 0;
}

int cmd_study(const ExperimentConfig& cfg) {
  const std::vector<StudyRow> rows = run_study(cfg);
  std::printf("%12s %12s %13s %16s %14s %10s %10s\n", "delta", "trace_error",
              "qkl_to_truth", "qkl_penalty_gap", "data_residual", "iters",
              "stop");
  for (const StudyRow& r : rows)
    std::printf("%12.4e %12.4e %13.4e %16.4e %14.4e %10lld %10s\n", r.delta,
                r.trace_error, r.qkl_to_truth, r.qkl_penalty_gap,
                r.data_residual, r.iterations, r.stop_reason.c_str());
  const std::filesystem::path dir(cfg.output_dir);
  std::cout << "wrote " << (dir / "study.csv").string() << " and "
            << (dir / "study.svg").string() << "\n";
  return 0;
}

// ---- self checks ---------------------------------------------------------

int g_failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  if (ok) {
    std::cout << "PASS " << name << "\n";
  } else {
    std::cout << "FAIL " << name << ": " << detail << "\n";
    ++g_failures;
  }
}

HermitianMatrix random_hermitian(int dim, CounterRng& rng, double scale) {
  HermitianMatrix m(dim);
  for (int i = 0; i < dim; ++i) {
    m.set(i, i, cplx(scale * rng.next_normal(), 0.0));
    for (int j = i + 1; j < dim; ++j) {
      const double re = scale * rng.next_normal();
      const double im = scale * rng.next_normal();
      m.set(i, j, cplx(re, im));
    }
  }
  return m;
}

void check_special_functions() {
  const std::vector<double> row = bessel_j_row(2.0, 40);
  report("bessel j1(2)", std::abs(row[41] - 0.5767248077568734) < 1e-12,
         "value " + num(row[41]));

  const std::vector<double> big = bessel_j_row(2.0 * 5.19, 80);
  double norm = 0.0;
  for (double v : big) norm += v * v;
  report("bessel window norm", std::abs(norm - 1.0) < 1e-10,
         "sum " + num(norm));

  double worst = 0.0;
  for (int t = -700; t <= 700; t += 7) {
    const double s = g_inverse(static_cast<double>(t));
    const double resid = std::abs(std::log(s) + s - t) /
                         std::max(1.0, std::abs(static_cast<double>(t)));
    worst = std::max(worst, resid);
  }
  report("g_inverse residual", worst < 1e-12, "worst " + num(worst));

  const Quadrature q = gauss_legendre(220, -10.0, 10.0);
  double max_dev = 0.0;
  std::vector<std::vector<double>> vals(q.nodes.size());
  for (std::size_t k = 0; k < q.nodes.size(); ++k)
    vals[k] = hermite_fn(12, q.nodes[k]);
  for (int m = 0; m <= 12; ++m)
    for (int n = m; n <= 12; ++n) {
      double acc = 0.0;
      for (std::size_t k = 0; k < q.nodes.size(); ++k)
        acc += q.weights[k] * vals[k][m] * vals[k][n];
      max_dev = std::max(max_dev, std::abs(acc - (m == n ? 1.0 : 0.0)));
    }
  report("hermite orthonormality", max_dev < 1e-8, "dev " + num(max_dev));
}

void check_kernels() {
  const auto& act = kernels::active();
  const auto& ref = kernels::scalar_table();
  std::cout << "kernel table: " << act.name << "\n";

  CounterRng rng(0x6368656b);
  double worst = 0.0;
  for (std::size_t n : {std::size_t{1}, std::size_t{7}, std::size_t{16},
                        std::size_t{33}}) {
    std::vector<double> x(n), y(n), g(n), go(n), o1(n), o2(n);
    std::vector<cplx> cx(n), cy1(n), cy2(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.next_normal();
      y[i] = rng.next_normal();
      g[i] = rng.next_uniform(-0.5, 0.5);
      go[i] = rng.next_uniform(0.0, 2.0);
      cx[i] = cplx(rng.next_normal(), rng.next_normal());
      cy1[i] = cy2[i] = cplx(rng.next_normal(), rng.next_normal());
    }
    worst = std::max(worst, std::abs(act.dot(x.data(), y.data(), n) -
                                     ref.dot(x.data(), y.data(), n)));
    o1 = y;
    o2 = y;
    act.axpy(o1.data(), 1.25, x.data(), n);
    ref.axpy(o2.data(), 1.25, x.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      worst = std::max(worst, std::abs(o1[i] - o2[i]));
    const cplx a(0.3, -0.7);
    act.zaxpy(cy1.data(), a, cx.data(), n);
    ref.zaxpy(cy2.data(), a, cx.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      worst = std::max(worst, std::abs(cy1[i] - cy2[i]));
    o1 = g;
    o2 = g;
    const double r1 = act.kl_dual_prox(o1.data(), g.data(), go.data(), 0.5, n);
    const double r2 = ref.kl_dual_prox(o2.data(), g.data(), go.data(), 0.5, n);
    worst = std::max(worst, std::abs(r1 - r2));
    for (std::size_t i = 0; i < n; ++i)
      worst = std::max(worst, std::abs(o1[i] - o2[i]));
  }
  report("kernel equivalence", worst < 1e-12, "dev " + num(worst));
}

void check_prox() {
  CounterRng rng(0x70726f78);
  const int dim = 6;
  HermitianMatrix prior_raw = random_hermitian(dim, rng, 0.5);
  HermitianMatrix prior = apply_spectral(
      prior_raw, [](double t) { return std::exp(0.4 * t); });
  const double tr = prior.trace();
  prior = herm_lincomb(1.0 / tr, prior, 0.0, prior);
  const QreContext ctx = make_qre_context(prior);

  double worst_opt = 0.0, worst_moreau = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const HermitianMatrix sigma = random_hermitian(dim, rng, 1.0);
    for (double tau : {0.1, 1.0, 10.0}) {
      const HermitianMatrix p = qkl_prox(sigma, tau, ctx);
      const HermitianMatrix lhs =
          herm_lincomb(1.0 / tau, sigma, -1.0 / tau, p);
      // ln(p) evaluated in the eigenbasis of the prox argument, which a
      // fresh eigendecomposition of p cannot resolve when its eigenvalue
      // spread exceeds double precision
      const HermitianMatrix arg = herm_lincomb(
          1.0, herm_lincomb(1.0 / tau, sigma, 1.0, ctx.log_prior),
          -std::log(tau), HermitianMatrix::identity(dim));
      const HermitianMatrix log_p = apply_spectral(
          arg, [tau](double t) { return std::log(tau * g_inverse(t)); });
      const HermitianMatrix rhs =
          herm_lincomb(1.0, log_p, -1.0, ctx.log_prior);
      worst_opt = std::max(
          worst_opt,
          herm_lincomb(1.0, lhs, -1.0, rhs).frobenius_norm());

      HermitianMatrix re = qkl_conj_prox(
          herm_lincomb(1.0 / tau, sigma, 0.0, sigma), 1.0 / tau, ctx);
      re = herm_lincomb(tau, re, 0.0, re);
      const HermitianMatrix sum = herm_lincomb(1.0, p, 1.0, re);
      worst_moreau = std::max(
          worst_moreau,
          herm_lincomb(1.0, sum, -1.0, sigma).frobenius_norm());
    }
  }
  report("prox optimality", worst_opt < 1e-9, "worst " + num(worst_opt));
  report("moreau identity", worst_moreau < 1e-9, "worst " + num(worst_moreau));
}

void check_models() {
  CounterRng rng(0x6d6f64);

  const PinemModel pm = pinem_build(9, 1.0, 12);
  const HomodyneModel hm = homodyne_build(7, 10, -4.5, 4.5, 40);
  const std::vector<const ForwardModel*> ops = {&pm.op, &hm.semi, &hm.basis};
  double worst_pair = 0.0;
  for (const ForwardModel* op : ops) {
    const HermitianMatrix rho = random_hermitian(op->dim(), rng, 1.0);
    DataGrid g(op->n_theta(), op->n_l());
    for (double& v : g.v) v = rng.next_normal();
    const DataGrid trho = op->apply(rho);
    double lhs = 0.0;
    for (std::size_t i = 0; i < g.v.size(); ++i) lhs += trho.v[i] * g.v[i];
    const double rhs = trace_inner(rho, op->adjoint(g));
    worst_pair =
        std::max(worst_pair, std::abs(lhs - rhs) /
                                 std::max(1.0, std::abs(lhs)));
  }
  report("adjoint pairing", worst_pair < 1e-10, "dev " + num(worst_pair));

  const PinemModel cons = pinem_build(21, 2.0, 16);
  HermitianMatrix rho = random_hermitian(21, rng, 0.4);
  rho = apply_spectral(rho, [](double t) { return std::exp(t); });
  const double tr = rho.trace();
  rho = herm_lincomb(1.0 / tr, rho, 0.0, rho);
  const DataGrid out = cons.op.apply(rho);
  double worst_cons = 0.0;
  for (int t = 0; t < out.n_theta; ++t) {
    double s = 0.0;
    for (int l = 0; l < out.n_l; ++l) s += out.at(t, l);
    worst_cons = std::max(worst_cons, std::abs(s - 1.0));
  }
  report("pinem probability conservation", worst_cons < 1e-8,
         "dev " + num(worst_cons));
}

int cmd_check() {
  check_special_functions();
  check_kernels();
  check_prox();
  check_models();
  if (g_failures > 0) {
    std::cout << g_failures << " check(s) failed\n";
    return 1;
  }
  std::cout << "all checks passed\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"density-matrix reconstruction with entropy regularization"};
  app.require_subcommand(1);

  CommonOpts sim_opts;
  double sim_intensity = 1e6;
  std::string sim_out = "sim-out";
  CLI::App* sim = app.add_subcommand(
      "simulate", "generate a ground truth state and shot-noise data");
  add_model_options(sim, sim_opts);
  sim->add_option("--intensity", sim_intensity, "beam intensity")
      ->check(CLI::PositiveNumber);
  sim->add_option("--output-dir", sim_out, "output directory");

  CommonOpts rec_opts;
  std::string rec_data, rec_truth, rec_out = "rho.qmat";
  SolverConfig rec_scfg;
  CLI::App* rec = app.add_subcommand(
      "reconstruct", "reconstruct a state from saved observation data");
  add_model_options(rec, rec_opts);
  rec->add_option("--data", rec_data, "observation grid file")->required();
  rec->add_option("--truth", rec_truth,
                  "optional truth matrix file for error metrics");
  rec->add_option("--output", rec_out, "output matrix file");
  rec->add_option("--alpha", rec_scfg.alpha, "regularization weight")
      ->required()
      ->check(CLI::PositiveNumber);
  rec->add_option("--mu", rec_scfg.mu,
                  "convexity constant for acceleration (default 0.5*alpha)");
  rec->add_option("--gap-threshold", rec_scfg.gap_threshold,
                  "duality gap stopping threshold");
  rec->add_option("--max-iters", rec_scfg.max_iters, "iteration cap");
  rec->add_option("--tau0", rec_scfg.tau0, "primal step size (0 = auto)");
  rec->add_option("--nu0", rec_scfg.nu0, "dual step size (0 = auto)");
  rec->add_option("--gap-stride", rec_scfg.gap_check_stride,
                  "iterations between gap checks");

  CommonOpts stu_opts;
  CLI::App* stu = app.add_subcommand(
      "study", "noise-ladder convergence study with CSV and SVG output");
  add_model_options(stu, stu_opts);
  stu->add_option("--intensities", stu_opts.cfg.intensities,
                  "explicit intensity ladder")
      ->delimiter(',');
  stu->add_option("--alpha0", stu_opts.cfg.alpha0,
                  "regularization prefactor (0 = fidelity default)");
  stu->add_option("--gap-threshold", stu_opts.cfg.gap_threshold,
                  "duality gap stopping threshold (0 = fidelity default)");
  stu->add_option("--max-iters", stu_opts.cfg.max_iters, "iteration cap");
  stu->add_option("--output-dir", stu_opts.cfg.output_dir,
                  "directory for study.csv and study.svg");

  CLI::App* chk = app.add_subcommand("check", "run the built-in self checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      finalize(sim_opts);
      return cmd_simulate(sim_opts.cfg, sim_intensity, sim_out);
    }
    if (*rec) {
      finalize(rec_opts);
      if (rec->count("--mu") == 0) rec_scfg.mu = 0.5 * rec_scfg.alpha;
      return cmd_reconstruct(rec_opts.cfg, rec_data, rec_truth, rec_out,
                             rec_scfg);
    }
    if (*stu) {
      finalize(stu_opts);
      return cmd_study(stu_opts.cfg);
    }
    if (*chk) return cmd_check();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
