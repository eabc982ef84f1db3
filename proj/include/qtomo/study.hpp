// Noise-level convergence studies: simulate shot-noise data for a known
// state over a ladder of beam intensities, reconstruct at each level with
// the noise-adapted regularization weight, and tabulate the error metrics.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qtomo/data_fidelity.hpp"
#include "qtomo/forward_model.hpp"
#include "qtomo/hermitian.hpp"

namespace qtomo {

enum class Experiment { pinem, homodyne };

const char* experiment_name(Experiment e);
Experiment experiment_from_name(const std::string& name);

const char* variant_name(HomodyneVariant v);
HomodyneVariant variant_from_name(const std::string& name);

struct ExperimentConfig {
  Experiment experiment = Experiment::pinem;
  Fidelity fidelity = Fidelity::l2;
  // Reconstruction operator for homodyne runs; simulated data always comes
  // from the bin-integrated (semi) operator, which models the histogram.
  HomodyneVariant operator_variant = HomodyneVariant::semi;

  int dim = 41;
  int n_theta = 100;
  int n_bins = 120;      // homodyne histogram bins
  double x_min = -5.0;   // homodyne quadrature window
  double x_max = 5.0;

  double g_pump = 1.73;       // coupling that prepared the electron state
  double g_probe = 5.19;      // coupling of the measurement interaction
  double cat_amplitude = 3.0; // homodyne ground-truth cat size
  double jitter_sigma = 0.1;  // phase jitter of the pump (pinem truth)
  int jitter_samples = 50;

  // Strictly increasing positive beam intensities, one study row each.
  std::vector<double> intensities;

  double alpha0 = 0.0;         // <= 0 picks 1.0 (l2) or 0.1 (kl)
  std::uint64_t seed = 1;
  double gap_threshold = 0.0;  // <= 0 picks 1e-6 (l2) or 1e-5 (kl)
  long long max_iters = 2'000'000;
  std::string output_dir = ".";
};

// Defaults used throughout the tooling; the ladder spans 1e2..1e10 in
// decade steps.
ExperimentConfig pinem_preset();
ExperimentConfig homodyne_preset();

struct StudyRow {
  double delta = 0.0;            // measured noise level S_{g_obs}(g_exact)
  double trace_error = 0.0;      // ||rho_hat - rho_truth||_tr
  double qkl_to_truth = 0.0;     // QKL(rho_hat, floored truth)
  double qkl_penalty_gap = 0.0;  // |QKL(rho_hat,prior) - QKL(truth,prior)|
  double data_residual = 0.0;    // S_{g_exact}(T rho_hat)
  long long iterations = 0;
  std::string stop_reason;       // "gap", "max_iters", or "error"
};

// Ground truth plus the measurement operators for one experiment.  Data is
// always generated by data_op(); reconstruction uses recon_op(), which for
// homodyne follows cfg.operator_variant.
struct Problem {
  HermitianMatrix truth;
  std::optional<PinemModel> pinem;
  std::optional<HomodyneModel> homodyne;
  HomodyneVariant recon_variant = HomodyneVariant::semi;

  const ForwardModel& data_op() const;
  const ForwardModel& recon_op() const;
};

Problem build_problem(const ExperimentConfig& cfg);

struct Observation {
  DataGrid g_obs;
  double delta = 0.0;
};

// Scales the exact data by the intensity, draws one Poisson count per cell
// from an independent counter stream (so the result does not depend on
// traversal order), and rescales back.  delta is the fidelity distance of
// the noisy data from the exact data.  Entries of g_exact slightly below
// zero (>= -1e-10) are clipped; anything lower throws.
Observation poisson_observe(const DataGrid& g_exact, double intensity,
                            std::uint64_t seed, Fidelity kind);

// Runs the full ladder: per intensity, observe, set alpha = alpha0 *
// sqrt(delta), reconstruct (l2 via the accelerated proximal-gradient
// solver, kl via the primal-dual solver), and collect metrics against the
// ground truth.  A row whose solve throws is recorded with stop_reason
// "error" and metrics evaluated at the prior, and the study continues.
// Writes study.csv (with provenance comments) and study.svg into
// cfg.output_dir.
std::vector<StudyRow> run_study(const ExperimentConfig& cfg);

// CSV with the exact header
// delta,trace_error,qkl_to_truth,qkl_penalty_gap,data_residual,iterations,stop_reason
// preceded by one "# key=value" comment line per provenance entry.
void write_study_csv(const std::vector<StudyRow>& rows,
                     const std::string& path,
                     const std::vector<std::string>& provenance);

// Standalone log-log SVG of all four error metrics versus delta, plus a
// plain CSV of the rows next to it (same stem, .csv).  Single rows plot as
// markers; nonpositive or nonfinite values are skipped on the log axes.
// Throws std::invalid_argument when rows is empty.
void emit_plot(const std::vector<StudyRow>& rows, const std::string& svg_path);

} // namespace qtomo
