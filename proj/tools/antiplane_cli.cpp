#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "antiplane/analysis.hpp"
#include "antiplane/greens.hpp"
#include "antiplane/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace antiplane;

namespace {

struct RunConfig {
  double radius = 256.0;
  double k = 0.4;
  int order = 0;
  std::string c2 = "";  // empty, a number, or "auto"
  std::string potential = "gaussian";
  double tol = 1e-8;
  double window_min = 0.0;  // 0 picks the default window
  double window_max = 0.0;
  int shells_per_octave = kDefaultShellsPerOctave;
  std::string output;
  std::string format = "json";
  int threads = 1;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

void add_common(CLI::App* app, RunConfig& cfg) {
  app->add_option("--radius,-R", cfg.radius, "Domain radius R")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--k,-K", cfg.k, "Stress intensity factor K")->capture_default_str()->check(CLI::NonNegativeNumber);
  app->add_option("--c2", cfg.c2, "C2 coefficient: a number or 'auto' (bisection calibration)");
  app->add_option("--potential", cfg.potential, "Pair potential")
      ->capture_default_str()
      ->check(CLI::IsMember({"gaussian", "default", "quadratic"}));
  app->add_option("--tol", cfg.tol, "Solver tolerance on the l-infinity gradient norm")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--window-min", cfg.window_min, "Fit window lower radius (default 16)");
  app->add_option("--window-max", cfg.window_max, "Fit window upper radius (default R/4)");
  app->add_option("--shells-per-octave", cfg.shells_per_octave, "Radial shells per factor 2 in radius")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--output,-o", cfg.output, "Output directory (default $ANTIPLANE_OUTPUT_DIR or .)");
  app->add_option("--format", cfg.format, "Report format")->capture_default_str()->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--threads", cfg.threads, "Worker cap (computation is single-threaded)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

fs::path output_dir(const RunConfig& cfg) {
  std::string dir = cfg.output;
  if (dir.empty()) {
    const char* env = std::getenv("ANTIPLANE_OUTPUT_DIR");
    dir = env && *env ? env : ".";
  }
  fs::create_directories(dir);
  return dir;
}

SolveSettings settings_of(const RunConfig& cfg) {
  SolveSettings s;
  s.tol_linf = cfg.tol;
  s.validate();
  return s;
}

DecayWindow window_of(const RunConfig& cfg) {
  DecayWindow w = DecayWindow::for_radius(cfg.radius);
  if (cfg.window_min > 0.0) w.r_min = cfg.window_min;
  if (cfg.window_max > 0.0) w.r_max = cfg.window_max;
  return w;
}

std::optional<double> parse_c2(const std::string& text) {
  if (text.empty() || text == "auto") return std::nullopt;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size()) throw UsageError("--c2 must be a number or 'auto', got '" + text + "'");
  return v;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  std::cout << path.string() << "\n";
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

template <typename Report>
void write_report(const fs::path& dir, const std::string& stem, const Report& r, const RunConfig& cfg) {
  if (cfg.format == "json") {
    write_json(dir / (stem + ".json"), json(r));
  } else {
    std::ostringstream s;
    write_csv(s, r);
    write_text(dir / (stem + ".csv"), s.str());
  }
}

std::string tag(const RunConfig& cfg) {
  std::ostringstream s;
  s << "R" << cfg.radius;
  return s.str();
}

// C2 from --c2; "auto" runs the calibration on `domain` when `needed`.
std::optional<double> resolve_c2(const RunConfig& cfg, bool needed, const DomainPtr& domain, const PairPotential& pot,
                                 const SolveSettings& settings, std::optional<C2Calibration>& calibration) {
  const auto fixed = parse_c2(cfg.c2);
  if (fixed || !needed) return fixed;
  if (cfg.c2 != "auto") throw UsageError("order 2 requires --c2 <value> or --c2 auto");
  PredictorSpec spec;
  spec.k = cfg.k;
  spec.order = 2;
  calibration = calibrate_c2(domain, spec, pot, settings);
  std::cerr << "calibrated C2 = " << calibration->c2 << " (" << calibration->solves << " solves)\n";
  return calibration->c2;
}

int cmd_solve(const RunConfig& cfg, int probes, std::uint64_t seed) {
  const auto pot = PairPotential::from_name(cfg.potential);
  const auto settings = settings_of(cfg);
  const auto domain = LatticeDomain::create(cfg.radius);
  const fs::path dir = output_dir(cfg);

  PredictorSpec spec;
  spec.k = cfg.k;
  spec.order = cfg.order;
  std::optional<C2Calibration> calibration;
  spec.c2 = resolve_c2(cfg, cfg.order == 2, domain, pot, settings, calibration);
  spec.validate();

  const CorrectorRun run = solve_corrector(domain, spec, pot, settings);
  RunDecay decay = decay_of_run(run, pot, window_of(cfg), cfg.shells_per_octave);
  const ReportMeta meta = make_meta(cfg.radius, spec, pot, settings);
  decay.corrector_gradient.meta = decay.forces.meta = decay.linear_residual.meta = meta;

  const std::string stem = "solve_" + tag(cfg) + "_order" + std::to_string(cfg.order);
  {
    std::ostringstream s;
    write_field_csv(s, run.corrector);
    write_text(dir / (stem + "_field.csv"), s.str());
  }
  json summary{{"meta", meta}, {"solve", run.report}};
  if (calibration) summary["calibration"] = *calibration;
  if (probes > 0) {
    PredictorSpec reference;
    reference.k = cfg.k;
    const EnergyAssembly assembly(pot, run.predictor, predictor_field(domain, reference));
    summary["stability_min_rayleigh"] = stability_check(assembly, run.corrector, probes, seed);
  }
  summary["slopes"] = {{"corrector_gradient", decay.corrector_gradient.slope},
                       {"forces", decay.forces.slope},
                       {"linear_residual", decay.linear_residual.slope}};
  write_json(dir / (stem + "_summary.json"), summary);
  write_report(dir, stem + "_corrector_gradient", decay.corrector_gradient, cfg);
  write_report(dir, stem + "_forces", decay.forces, cfg);
  write_report(dir, stem + "_linear_residual", decay.linear_residual, cfg);

  std::cerr << run.report.message << " after " << run.report.iterations << " iterations, |grad|_inf = "
            << run.report.residual_linf << ", slope |Du| = " << decay.corrector_gradient.slope << "\n";
  return run.report.converged ? 0 : 1;
}

Site parse_site(const std::string& text) {
  Site s;
  char comma = 0;
  std::istringstream in(text);
  if (!(in >> s.a >> comma >> s.b) || comma != ',' || !in.eof()) {
    throw UsageError("site must be given as a,b; got '" + text + "'");
  }
  return s;
}

int cmd_greens(const RunConfig& cfg, const std::string& source_text, const std::string& mu,
               const std::string& boundary, const std::vector<int>& gbar1_radii) {
  const Site s = parse_site(source_text);
  const auto domain = LatticeDomain::create(cfg.radius);
  const fs::path dir = output_dir(cfg);
  const CutoffProfile profile = mu == "on" ? CutoffProfile::quintic() : CutoffProfile::zero();
  const CrackGreenSolver solver(domain, boundary == "hat0" ? GreenBoundary::kHat0 : GreenBoundary::kSymmetric);

  const GreensColumn col = solver.column(s, profile);
  const std::string stem = "greens_" + tag(cfg) + "_s" + std::to_string(s.a) + "_" + std::to_string(s.b);
  {
    std::ostringstream out;
    out << std::setprecision(17) << "a,b,full,hat0,hat1_mu,remainder\n";
    for (std::size_t i = 0; i < domain->num_interior(); ++i) {
      const Site& m = domain->site(static_cast<int>(i));
      out << m.a << ',' << m.b << ',' << col.full[i] << ',' << col.hat0[i] << ',' << col.hat1_mu[i] << ','
          << col.remainder[i] << '\n';
    }
    write_text(dir / (stem + "_column.csv"), out.str());
  }

  // Symmetry spot check between the source and a few sites inside R/4.
  std::vector<Site> spots{s};
  for (const Site& m : std::vector<Site>{{1, 1}, {0, 0}, {5, 7}, {-6, 4}, {8, -5}}) {
    if (m != s && m.radius() <= cfg.radius / 4.0) spots.push_back(m);
  }

  json report{{"meta", {{"R", cfg.radius}, {"version", version()}}},
              {"source", {s.a, s.b}},
              {"mu", mu},
              {"boundary", boundary},
              {"residual_linf", col.residual_linf},
              {"symmetry_defect", green_symmetry_defect(solver, spots)}};
  report["symmetry_sites"] = json::array();
  for (const Site& m : spots) report["symmetry_sites"].push_back({m.a, m.b});

  const ScalarField& g1m = solver.g_hat1_m();
  DecayReport g1m_decay = shell_decay(grad(g1m).magnitude(), {8.0, cfg.radius / 4.0}, "g_hat1_m_gradient");
  g1m_decay.meta.radius = cfg.radius;
  g1m_decay.meta.version = version();
  report["g_hat1_m_gradient"] = g1m_decay;

  try {
    report["gbar1"] = gbar1_statistic(solver, s, profile);
  } catch (const std::invalid_argument& e) {
    report["gbar1"] = nullptr;
    report["gbar1_skipped"] = e.what();
  }
  if (!gbar1_radii.empty()) {
    DecayReport d = gbar1_diagnostic(ray_sources(gbar1_radii), solver, profile);
    d.meta.radius = cfg.radius;
    d.meta.version = version();
    report["gbar1_scaling"] = d;
  }
  write_json(dir / (stem + "_report.json"), report);
  std::cerr << "residual " << col.residual_linf << ", symmetry defect " << report["symmetry_defect"].get<double>()
            << "\n";
  return 0;
}

int cmd_converge(const RunConfig& cfg, std::vector<double> radii, const std::vector<int>& orders) {
  if (radii.size() < 3) throw UsageError("--radii needs at least 3 values (the largest is the reference)");
  std::sort(radii.begin(), radii.end());
  const auto pot = PairPotential::from_name(cfg.potential);
  const auto settings = settings_of(cfg);
  const fs::path dir = output_dir(cfg);
  bool ok = true;
  json all = json::array();
  for (int order : orders) {
    PredictorSpec spec;
    spec.k = cfg.k;
    spec.order = order;
    std::optional<C2Calibration> calibration;
    spec.c2 = resolve_c2(cfg, order == 2, LatticeDomain::create(radii.back()), pot, settings, calibration);
    ConvergenceReport rep = convergence_study(radii, spec, pot, settings);
    rep.meta = make_meta(radii.back(), spec, pot, settings);
    ok = ok && rep.converged;
    std::cerr << "order " << order << ": fitted order " << rep.fitted_order << "\n";
    write_report(dir, "converge_order" + std::to_string(order), rep, cfg);
    all.push_back(rep);
  }
  write_json(dir / "converge_summary.json", all);
  return ok ? 0 : 1;
}

int cmd_sinclair(const RunConfig& cfg, int terms) {
  const auto pot = PairPotential::from_name(cfg.potential);
  const auto settings = settings_of(cfg);
  const auto domain = LatticeDomain::create(cfg.radius);
  const fs::path dir = output_dir(cfg);
  PredictorSpec spec;
  spec.k = cfg.k;
  std::optional<C2Calibration> calibration;
  spec.c2 = resolve_c2(cfg, cfg.c2 == "auto", domain, pot, settings, calibration);
  SinclairSettings ss;
  ss.window = window_of(cfg);
  ss.shells_per_octave = cfg.shells_per_octave;
  SinclairReport rep = sinclair_experiment(domain, terms, spec, pot, settings, ss);
  rep.meta = make_meta(cfg.radius, spec, pot, settings);
  write_report(dir, "sinclair_" + tag(cfg), rep, cfg);
  std::cerr << "order 0 slope " << rep.order0_slope << ", Sinclair slope " << rep.sinclair_slope << ", improvement "
            << rep.improvement;
  if (rep.full_slope) std::cerr << ", full predictor slope " << *rep.full_slope;
  std::cerr << "\n";
  return rep.converged ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anti-plane crack lattice: predictor/corrector solves, Green's functions and decay reports"};
  app.set_config("--config", "", "Read options from a TOML/INI file");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));

  RunConfig cfg;

  int probes = 0;
  std::uint64_t seed = 7;
  auto* solve = app.add_subcommand("solve", "Solve for the corrector and write decay reports");
  add_common(solve, cfg);
  solve->add_option("--order", cfg.order, "Predictor order")->capture_default_str()->check(CLI::Range(0, 2));
  solve->add_option("--stability-probes", probes, "Lanczos steps for the stability check (0 skips it)");
  solve->add_option("--seed", seed, "Seed of the stability probe")->capture_default_str();

  std::string source, mu = "on", boundary = "symmetric";
  std::vector<int> gbar1_radii;
  auto* greens = app.add_subcommand("greens", "Crack Green's column, its decomposition and diagnostics");
  add_common(greens, cfg);
  greens->add_option("--source", source, "Source site a,b")->required();
  greens->add_option("--mu", mu, "Discrete geometry correction")->capture_default_str()->check(CLI::IsMember({"on", "off"}));
  greens->add_option("--boundary", boundary, "Far-field data")
      ->capture_default_str()
      ->check(CLI::IsMember({"symmetric", "hat0"}));
  greens->add_option("--gbar1-radii", gbar1_radii, "Source radii on the ray x1 = 1/2 for the scaling fit")
      ->delimiter(',');

  std::vector<double> radii;
  std::vector<int> orders{0, 2};
  auto* converge = app.add_subcommand("converge", "Convergence of the corrector in R");
  add_common(converge, cfg);
  converge->add_option("--radii", radii, "Radii; the largest is the reference")->required()->delimiter(',');
  converge->add_option("--orders", orders, "Predictor orders")->capture_default_str()->delimiter(',');

  int terms = 1;
  auto* sinclair = app.add_subcommand("sinclair", "Best-coefficient Sinclair series versus the predictors");
  add_common(sinclair, cfg);
  sinclair->add_option("--terms", terms, "Optimised terms beyond c0 = K; the series length is terms + 1")->capture_default_str()->check(CLI::Range(0, 4));

  CLI11_PARSE(app, argc, argv);

  try {
    if (cfg.potential == "default") cfg.potential = "gaussian";
    if (*solve) return cmd_solve(cfg, probes, seed);
    if (*greens) return cmd_greens(cfg, source, mu, boundary, gbar1_radii);
    if (*converge) return cmd_converge(cfg, radii, orders);
    if (*sinclair) return cmd_sinclair(cfg, terms);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
