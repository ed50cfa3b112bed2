#pragma once

#include <optional>
#include <string>
#include <vector>

#include "antiplane/lattice.hpp"
#include "antiplane/potential.hpp"
#include "antiplane/predictors.hpp"
#include "antiplane/solver.hpp"

namespace antiplane {

/// Run metadata carried by every report.
struct ReportMeta {
  double radius = 0.0;
  double k = 0.0;
  int order = 0;
  std::optional<double> c2;
  double tol = 0.0;
  std::string potential = "gaussian";
  std::string version;
};

struct Shell {
  double r_lo = 0.0;
  double r_hi = 0.0;
  double r_mid = 0.0;  // geometric mean of the shell edges
  double max = 0.0;
  double mean = 0.0;
  int count = 0;
};

struct DecayWindow {
  double r_min = 16.0;
  double r_max = 0.0;

  /// [16, R/4].
  static DecayWindow standard(double radius) { return {16.0, radius / 4.0}; }
  /// standard(R) when it holds at least 3 quarter-octave shells, else [R/8, R/2].
  static DecayWindow for_radius(double radius);
};

/// Radial shell statistics of a nonnegative field and the fitted log-log slope
/// of the shell maxima over the window.
struct DecayReport {
  std::string label;
  std::vector<Shell> shells;
  double slope = 0.0;  // NaN when fewer than 3 shells in the window are nonzero
  DecayWindow window;
  int shells_per_octave = 4;
  int fitted_shells = 0;
  ReportMeta meta;
};

inline constexpr int kDefaultShellsPerOctave = 4;

/// Shells [2^{k/n}, 2^{(k+1)/n}) with n = shells_per_octave over interior sites.
/// Throws std::invalid_argument if the window lies outside [2, R/2] or holds
/// fewer than 3 complete shells.
DecayReport shell_decay(const ScalarField& magnitude, DecayWindow window, std::string label = {},
                        int shells_per_octave = kDefaultShellsPerOctave);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Corrector u_bar for a given clamped predictor, with the energy reference
/// taken as K omega_2.
struct CorrectorRun {
  ScalarField predictor;
  ScalarField corrector;
  SolveReport report;
};

CorrectorRun solve_corrector(const DomainPtr& domain, const PredictorSpec& spec, const PairPotential& potential,
                             const SolveSettings& settings);
CorrectorRun solve_corrector(const DomainPtr& domain, ScalarField predictor, double k,
                             const PairPotential& potential, const SolveSettings& settings);

/// The three diagnostic decay curves of one run: |D u_bar|, the predictor
/// forces |Div grad V(D u_pred)| and the linear residual |Div D u_bar|.
struct RunDecay {
  DecayReport corrector_gradient;
  DecayReport forces;
  DecayReport linear_residual;
};

RunDecay decay_of_run(const CorrectorRun& run, const PairPotential& potential, DecayWindow window,
                      int shells_per_octave = kDefaultShellsPerOctave);

/// Projection of a corrector onto r^{-1/2} sin(theta/2) over R/4 <= |x| <= R/2.
double far_field_amplitude(const ScalarField& corrector);

/// Sum of |D u|^2 over interior sites with R/4 <= |x| <= R/2.
double far_field_energy(const ScalarField& corrector);

struct C2Calibration {
  double c2 = 0.0;
  int iterations = 0;
  int solves = 0;
  double lo = 0.0;
  double hi = 0.0;
  bool widened = false;
  /// (C, a(C)) at every evaluated C.
  std::vector<std::pair<double, double>> samples;
};

struct CalibrationSettings {
  double lo = -1.0;
  double hi = 1.0;
  double tol = 1e-8;
  int max_iter = 80;
};

/// Bisection for the root of the far-field amplitude a(C) of the order-2 corrector.
/// The bracket is widened once (tenfold about its centre) if it shows no sign change.
C2Calibration calibrate_c2(const DomainPtr& domain, PredictorSpec spec, const PairPotential& potential,
                           const SolveSettings& settings, const CalibrationSettings& cal = {});

struct ConvergenceReport {
  int order = 0;
  std::optional<double> c2;
  std::vector<double> radii;  // excludes the reference radius
  double reference_radius = 0.0;
  std::vector<double> errors;
  double fitted_order = 0.0;
  /// Same difference restricted to bonds touching the interior of the smallest domain.
  std::vector<double> errors_common;
  double fitted_order_common = 0.0;
  bool converged = true;
  ReportMeta meta;
};

/// |D(u_R - u_ref)|_{l2} with both correctors extended by zero outside their
/// domains. With `region`, only bonds with an endpoint in its interior count.
double energy_norm_difference(const ScalarField& coarse, const ScalarField& reference,
                              const LatticeDomain* region = nullptr);

/// Solves at each radius (the largest one is the reference) and fits the
/// convergence order of the energy-norm error.
ConvergenceReport convergence_study(std::vector<double> radii, const PredictorSpec& spec,
                                    const PairPotential& potential, const SolveSettings& settings);

struct SinclairSample {
  double c1 = 0.0;
  double far_field_energy = 0.0;
};

struct SinclairReport {
  int terms = 1;
  std::vector<double> coefficients;  // c_0 = K, c_1, ... optimised
  std::vector<SinclairSample> scan;
  double order0_slope = 0.0;
  double sinclair_slope = 0.0;
  /// order0_slope - sinclair_slope; positive means faster decay.
  double improvement = 0.0;
  std::optional<double> full_slope;
  std::optional<double> c2;
  double order0_far_energy = 0.0;
  double sinclair_far_energy = 0.0;
  bool converged = true;
  ReportMeta meta;
};

struct SinclairSettings {
  double grid_min = -1.0;
  double grid_max = 1.0;
  int grid_points = 21;
  int golden_iterations = 30;
  DecayWindow window{16.0, 0.0};  // r_max = 0 means R/4
  int shells_per_octave = kDefaultShellsPerOctave;
};

/// Best-coefficient Sinclair series versus the order-0 predictor and, when
/// spec.c2 is set, the full three-term predictor.
SinclairReport sinclair_experiment(const DomainPtr& domain, int terms, const PredictorSpec& spec,
                                   const PairPotential& potential, const SolveSettings& settings,
                                   const SinclairSettings& sinclair = {});

}  // namespace antiplane
