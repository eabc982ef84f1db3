#include "qtomo/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "qtomo/qre.hpp"
#include "qtomo/random.hpp"
#include "qtomo/solvers.hpp"
#include "qtomo/states.hpp"

namespace qtomo {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

} // namespace

const char* experiment_name(Experiment e) {
  return e == Experiment::pinem ? "pinem" : "homodyne";
}

Experiment experiment_from_name(const std::string& name) {
  if (name == "pinem") return Experiment::pinem;
  if (name == "homodyne") return Experiment::homodyne;
  throw std::invalid_argument("unknown experiment: " + name);
}

const char* variant_name(HomodyneVariant v) {
  return v == HomodyneVariant::semi ? "semi" : "basis";
}

HomodyneVariant variant_from_name(const std::string& name) {
  if (name == "semi") return HomodyneVariant::semi;
  if (name == "basis") return HomodyneVariant::basis;
  throw std::invalid_argument("unknown operator variant: " + name);
}

namespace {

std::vector<double> decade_ladder() {
  std::vector<double> v;
  for (int e = 2; e <= 10; ++e) v.push_back(std::pow(10.0, e));
  return v;
}

} // namespace

ExperimentConfig pinem_preset() {
  ExperimentConfig cfg;
  cfg.experiment = Experiment::pinem;
  cfg.dim = 41;
  cfg.n_theta = 100;
  cfg.g_pump = 1.73;
  cfg.g_probe = 5.19;
  cfg.jitter_sigma = 0.1;
  cfg.jitter_samples = 50;
  cfg.intensities = decade_ladder();
  return cfg;
}

ExperimentConfig homodyne_preset() {
  ExperimentConfig cfg;
  cfg.experiment = Experiment::homodyne;
  cfg.dim = 21;
  cfg.n_theta = 60;
  cfg.n_bins = 120;
  cfg.x_min = -5.0;
  cfg.x_max = 5.0;
  cfg.cat_amplitude = 3.0;
  cfg.intensities = decade_ladder();
  return cfg;
}

const ForwardModel& Problem::data_op() const {
  if (pinem) return pinem->op;
  return homodyne->semi;
}

const ForwardModel& Problem::recon_op() const {
  if (pinem) return pinem->op;
  return recon_variant == HomodyneVariant::semi ? homodyne->semi
                                                : homodyne->basis;
}

Problem build_problem(const ExperimentConfig& cfg) {
  Problem p;
  p.recon_variant = cfg.operator_variant;
  if (cfg.experiment == Experiment::pinem) {
    p.truth = make_pinem_state(cfg.g_pump, cfg.dim, cfg.jitter_sigma,
                               cfg.jitter_samples,
                               derive_seed(cfg.seed, 0x74727574ull));
    p.pinem.emplace(pinem_build(cfg.dim, cfg.g_probe, cfg.n_theta));
  } else {
    p.truth = make_cat_state(cfg.cat_amplitude, cfg.dim);
    p.homodyne.emplace(homodyne_build(cfg.dim, cfg.n_theta, cfg.x_min,
                                      cfg.x_max, cfg.n_bins));
  }
  if (std::abs(p.truth.trace() - 1.0) > 1e-10)
    throw std::runtime_error("build_problem: ground truth trace is off unity");
  return p;
}

Observation poisson_observe(const DataGrid& g_exact, double intensity,
                            std::uint64_t seed, Fidelity kind) {
  if (!(intensity > 0.0) || !std::isfinite(intensity))
    throw std::invalid_argument(
        "poisson_observe: intensity must be positive and finite");
  DataGrid clipped = g_exact;
  for (double& v : clipped.v) {
    if (v < -1e-10 || !std::isfinite(v))
      throw std::invalid_argument(
          "poisson_observe: exact data has an entry below -1e-10");
    if (v < 0.0) v = 0.0;
  }
  Observation out{DataGrid(g_exact.n_theta, g_exact.n_l), 0.0};
  for (std::size_t i = 0; i < clipped.v.size(); ++i) {
    CounterRng cell(seed, i);
    const long long k = poisson_sample(cell, intensity * clipped.v[i]);
    out.g_obs.v[i] = static_cast<double>(k) / intensity;
  }
  out.delta = fit_value(kind, out.g_obs, clipped);
  return out;
}

namespace {

std::vector<std::string> provenance_lines(const ExperimentConfig& cfg,
                                          double alpha0, double gap_thr) {
  std::vector<std::string> p;
  p.push_back("generator=qtomo-study");
  p.push_back(std::string("experiment=") + experiment_name(cfg.experiment) +
              " fidelity=" + fidelity_name(cfg.fidelity) +
              " operator_variant=" + variant_name(cfg.operator_variant));
  p.push_back("dim=" + std::to_string(cfg.dim) +
              " n_theta=" + std::to_string(cfg.n_theta) +
              " n_bins=" + std::to_string(cfg.n_bins) + " x_min=" +
              fmt_short(cfg.x_min) + " x_max=" + fmt_short(cfg.x_max));
  p.push_back("g_pump=" + fmt_short(cfg.g_pump) +
              " g_probe=" + fmt_short(cfg.g_probe) +
              " cat_amplitude=" + fmt_short(cfg.cat_amplitude) +
              " jitter_sigma=" + fmt_short(cfg.jitter_sigma) +
              " jitter_samples=" + std::to_string(cfg.jitter_samples));
  p.push_back("alpha0=" + fmt_short(alpha0) + " gap_threshold=" +
              fmt_short(gap_thr) + " max_iters=" +
              std::to_string(cfg.max_iters) + " seed=" +
              std::to_string(cfg.seed));
  p.push_back(
      "rng=counter-splitmix64 poisson=inversion(mean<30)|ptrs "
      "row_seed=derive_seed(seed,row) cell_stream=cell_index");
  std::string ladder = "intensities=";
  for (std::size_t i = 0; i < cfg.intensities.size(); ++i) {
    if (i > 0) ladder += ",";
    ladder += fmt_short(cfg.intensities[i]);
  }
  p.push_back(std::move(ladder));
  return p;
}

} // namespace

std::vector<StudyRow> run_study(const ExperimentConfig& cfg) {
  if (cfg.intensities.empty())
    throw std::invalid_argument("run_study: intensity ladder is empty");
  for (std::size_t i = 0; i < cfg.intensities.size(); ++i) {
    const double v = cfg.intensities[i];
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument(
          "run_study: intensities must be positive and finite");
    if (i > 0 && !(v > cfg.intensities[i - 1]))
      throw std::invalid_argument(
          "run_study: intensities must be strictly increasing");
  }
  const bool l2 = cfg.fidelity == Fidelity::l2;
  const double alpha0 = cfg.alpha0 > 0.0 ? cfg.alpha0 : (l2 ? 1.0 : 0.1);
  const double gap_thr =
      cfg.gap_threshold > 0.0 ? cfg.gap_threshold : (l2 ? 1e-6 : 1e-5);

  const Problem problem = build_problem(cfg);
  const HermitianMatrix& truth = problem.truth;
  const DataGrid g_exact = problem.data_op().apply(truth);
  const HermitianMatrix prior = herm_lincomb(
      1.0 / cfg.dim, HermitianMatrix::identity(cfg.dim), 0.0,
      HermitianMatrix::identity(cfg.dim));
  const QreContext ctx = make_qre_context(prior);
  const QreContext truth_ctx =
      make_qre_context(floor_eigenvalues(truth, 1e-10));
  const double penalty_truth = qkl_value(truth, ctx);

  std::vector<StudyRow> rows;
  rows.reserve(cfg.intensities.size());
  for (std::size_t i = 0; i < cfg.intensities.size(); ++i) {
    StudyRow row;
    const Observation obs = poisson_observe(
        g_exact, cfg.intensities[i], derive_seed(cfg.seed, i), cfg.fidelity);
    row.delta = obs.delta;

    SolverConfig scfg;
    scfg.alpha = alpha0 * std::sqrt(obs.delta);
    // the proxed penalty is alpha * QKL, so its convexity constant carries
    // the same alpha factor
    scfg.mu = 0.5 * scfg.alpha;
    scfg.gap_threshold = gap_thr;
    scfg.max_iters = cfg.max_iters;

    HermitianMatrix rho_hat = prior;
    try {
      if (!(scfg.alpha > 0.0))
        throw std::runtime_error("noise level is zero");
      SolverReport rep =
          l2 ? fista_solve(problem.recon_op(), obs.g_obs, ctx, scfg)
             : cp_solve(problem.recon_op(), obs.g_obs, ctx, cfg.fidelity,
                        scfg);
      row.iterations = rep.iterations;
      row.stop_reason = stop_reason_name(rep.stop_reason);
      rho_hat = std::move(rep.solution);
    } catch (const std::exception&) {
      row.stop_reason = "error";
    }

    row.trace_error = trace_norm(herm_lincomb(1.0, rho_hat, -1.0, truth));
    row.qkl_to_truth = qkl_value(rho_hat, truth_ctx);
    row.qkl_penalty_gap =
        std::abs(qkl_value(rho_hat, ctx) - penalty_truth);
    row.data_residual =
        fit_value(cfg.fidelity, g_exact, problem.data_op().apply(rho_hat));
    rows.push_back(std::move(row));
  }

  std::filesystem::create_directories(cfg.output_dir);
  const std::filesystem::path dir(cfg.output_dir);
  emit_plot(rows, (dir / "study.svg").string());
  write_study_csv(rows, (dir / "study.csv").string(),
                  provenance_lines(cfg, alpha0, gap_thr));
  return rows;
}

void write_study_csv(const std::vector<StudyRow>& rows,
                     const std::string& path,
                     const std::vector<std::string>& provenance) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  for (const std::string& line : provenance) os << "# " << line << "\n";
  os << "delta,trace_error,qkl_to_truth,qkl_penalty_gap,data_residual,"
        "iterations,stop_reason\n";
  for (const StudyRow& r : rows)
    os << fmt(r.delta) << "," << fmt(r.trace_error) << ","
       << fmt(r.qkl_to_truth) << "," << fmt(r.qkl_penalty_gap) << ","
       << fmt(r.data_residual) << "," << r.iterations << "," << r.stop_reason
       << "\n";
  if (!os) throw std::runtime_error("write failed: " + path);
}

namespace {

struct Series {
  const char* label;
  const char* color;
  double (*pick)(const StudyRow&);
};

constexpr Series kSeries[] = {
    {"trace_error", "#d62728", [](const StudyRow& r) { return r.trace_error; }},
    {"qkl_to_truth", "#1f77b4",
     [](const StudyRow& r) { return r.qkl_to_truth; }},
    {"qkl_penalty_gap", "#2ca02c",
     [](const StudyRow& r) { return r.qkl_penalty_gap; }},
    {"data_residual", "#9467bd",
     [](const StudyRow& r) { return r.data_residual; }},
};

bool plottable(double v) { return std::isfinite(v) && v > 0.0; }

std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(int e) { return "1e" + std::to_string(e); }

} // namespace

void emit_plot(const std::vector<StudyRow>& rows,
               const std::string& svg_path) {
  if (rows.empty())
    throw std::invalid_argument("emit_plot: no rows to plot");

  std::filesystem::path csv_path(svg_path);
  csv_path.replace_extension(".csv");
  write_study_csv(rows, csv_path.string(), {});

  // Log-log ranges over every plottable point.
  double lx0 = 0.0, lx1 = 0.0, ly0 = 0.0, ly1 = 0.0;
  bool any = false;
  for (const StudyRow& r : rows) {
    if (!plottable(r.delta)) continue;
    for (const Series& s : kSeries) {
      const double v = s.pick(r);
      if (!plottable(v)) continue;
      const double lx = std::log10(r.delta);
      const double ly = std::log10(v);
      if (!any) {
        lx0 = lx1 = lx;
        ly0 = ly1 = ly;
        any = true;
      } else {
        lx0 = std::min(lx0, lx);
        lx1 = std::max(lx1, lx);
        ly0 = std::min(ly0, ly);
        ly1 = std::max(ly1, ly);
      }
    }
  }
  if (!any) {
    std::ofstream os(svg_path);
    if (!os) throw std::runtime_error("cannot open for writing: " + svg_path);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"760\" "
          "height=\"560\"><text x=\"30\" y=\"40\" font-family=\"sans-serif\">"
          "no plottable data (all values nonpositive or nonfinite)"
          "</text></svg>\n";
    return;
  }
  if (lx1 - lx0 < 1e-9) {
    lx0 -= 0.5;
    lx1 += 0.5;
  }
  if (ly1 - ly0 < 1e-9) {
    ly0 -= 0.5;
    ly1 += 0.5;
  }
  lx0 -= 0.2;
  lx1 += 0.2;
  ly0 -= 0.2;
  ly1 += 0.2;

  const double left = 80.0, top = 44.0, plot_w = 480.0, plot_h = 440.0;
  const auto px = [&](double x) {
    return left + (std::log10(x) - lx0) / (lx1 - lx0) * plot_w;
  };
  const auto py = [&](double y) {
    return top + plot_h - (std::log10(y) - ly0) / (ly1 - ly0) * plot_h;
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"760\" "
        "height=\"560\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"760\" height=\"560\" fill=\"white\"/>\n";
  os << "<text x=\"" << svg_num(left + plot_w / 2)
     << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
        "reconstruction error vs noise level</text>\n";

  // Decade gridlines and tick labels.
  for (int e = static_cast<int>(std::ceil(lx0));
       e <= static_cast<int>(std::floor(lx1)); ++e) {
    const double x = left + (e - lx0) / (lx1 - lx0) * plot_w;
    os << "<line x1=\"" << svg_num(x) << "\" y1=\"" << svg_num(top)
       << "\" x2=\"" << svg_num(x) << "\" y2=\"" << svg_num(top + plot_h)
       << "\" stroke=\"#dddddd\"/>\n";
    os << "<text x=\"" << svg_num(x) << "\" y=\"" << svg_num(top + plot_h + 18)
       << "\" text-anchor=\"middle\">" << tick_label(e) << "</text>\n";
  }
  for (int e = static_cast<int>(std::ceil(ly0));
       e <= static_cast<int>(std::floor(ly1)); ++e) {
    const double y = top + plot_h - (e - ly0) / (ly1 - ly0) * plot_h;
    os << "<line x1=\"" << svg_num(left) << "\" y1=\"" << svg_num(y)
       << "\" x2=\"" << svg_num(left + plot_w) << "\" y2=\"" << svg_num(y)
       << "\" stroke=\"#dddddd\"/>\n";
    os << "<text x=\"" << svg_num(left - 8) << "\" y=\"" << svg_num(y + 4)
       << "\" text-anchor=\"end\">" << tick_label(e) << "</text>\n";
  }
  os << "<rect x=\"" << svg_num(left) << "\" y=\"" << svg_num(top)
     << "\" width=\"" << svg_num(plot_w) << "\" height=\"" << svg_num(plot_h)
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << svg_num(left + plot_w / 2) << "\" y=\""
     << svg_num(top + plot_h + 40)
     << "\" text-anchor=\"middle\">delta (noise level)</text>\n";
  os << "<text x=\"20\" y=\"" << svg_num(top + plot_h / 2)
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
     << svg_num(top + plot_h / 2) << ")\">metric value</text>\n";

  int legend_row = 0;
  for (const Series& s : kSeries) {
    std::vector<std::pair<double, double>> pts;
    for (const StudyRow& r : rows) {
      const double v = s.pick(r);
      if (plottable(r.delta) && plottable(v))
        pts.emplace_back(px(r.delta), py(v));
    }
    if (pts.size() >= 2) {
      os << "<polyline fill=\"none\" stroke=\"" << s.color
         << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [x, y] : pts) os << svg_num(x) << "," << svg_num(y) << " ";
      os << "\"/>\n";
    }
    for (const auto& [x, y] : pts)
      os << "<circle cx=\"" << svg_num(x) << "\" cy=\"" << svg_num(y)
         << "\" r=\"3.5\" fill=\"" << s.color << "\"/>\n";

    const double ly = top + 10 + 20.0 * legend_row++;
    os << "<line x1=\"" << svg_num(left + plot_w + 16) << "\" y1=\""
       << svg_num(ly) << "\" x2=\"" << svg_num(left + plot_w + 44)
       << "\" y2=\"" << svg_num(ly) << "\" stroke=\"" << s.color
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << svg_num(left + plot_w + 50) << "\" y=\""
       << svg_num(ly + 4) << "\">" << s.label << "</text>\n";
  }
  os << "</svg>\n";

  std::ofstream fh(svg_path);
  if (!fh) throw std::runtime_error("cannot open for writing: " + svg_path);
  fh << os.str();
  if (!fh) throw std::runtime_error("write failed: " + svg_path);
}

} // namespace qtomo
