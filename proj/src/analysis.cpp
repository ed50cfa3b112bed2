#include "antiplane/analysis.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace antiplane {

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

DecayWindow DecayWindow::for_radius(double radius) {
  const DecayWindow w = standard(radius);
  if (w.r_max >= w.r_min * std::exp2(3.0 / kDefaultShellsPerOctave)) return w;
  return {radius / 8.0, radius / 2.0};
}

DecayReport shell_decay(const ScalarField& magnitude, DecayWindow window, std::string label, int shells_per_octave) {
  const auto& dom = magnitude.domain();
  const double radius = dom.radius();
  if (shells_per_octave < 1) throw std::invalid_argument("shell_decay: shells_per_octave must be >= 1");
  if (window.r_max <= 0.0) window.r_max = radius / 4.0;
  constexpr double kSlack = 1e-9;
  if (window.r_min < 2.0 - kSlack || window.r_max > radius / 2.0 + kSlack || window.r_min >= window.r_max) {
    throw std::invalid_argument("shell_decay: window must satisfy 2 <= r_min < r_max <= R/2");
  }

  const double n = shells_per_octave;
  std::map<int, Shell> by_index;
  for (std::size_t i = 0; i < dom.num_interior(); ++i) {
    const double r = dom.site(static_cast<int>(i)).radius();
    const int k = static_cast<int>(std::floor(n * std::log2(r) + 1e-12));
    Shell& s = by_index[k];
    if (s.count == 0) {
      s.r_lo = std::exp2(k / n);
      s.r_hi = std::exp2((k + 1) / n);
      s.r_mid = std::sqrt(s.r_lo * s.r_hi);
    }
    const double v = std::abs(magnitude[i]);
    s.max = std::max(s.max, v);
    s.mean += v;
    ++s.count;
  }

  DecayReport rep;
  rep.label = std::move(label);
  rep.window = window;
  rep.shells_per_octave = shells_per_octave;
  std::vector<double> xs, ys;
  int in_window = 0;
  for (auto& [k, s] : by_index) {
    s.mean /= s.count;
    rep.shells.push_back(s);
    const bool inside = s.r_lo >= window.r_min * (1.0 - kSlack) && s.r_hi <= window.r_max * (1.0 + kSlack);
    if (!inside) continue;
    ++in_window;
    if (s.max > 0.0) {
      xs.push_back(s.r_mid);
      ys.push_back(s.max);
    }
  }
  if (in_window < 3) {
    throw std::invalid_argument("shell_decay: fewer than 3 shells inside the fit window");
  }
  rep.fitted_shells = static_cast<int>(xs.size());
  rep.slope = xs.size() >= 3 ? loglog_slope(xs, ys) : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

CorrectorRun solve_corrector(const DomainPtr& domain, ScalarField predictor, double k,
                             const PairPotential& potential, const SolveSettings& settings) {
  PredictorSpec ref_spec;
  ref_spec.k = k;
  ref_spec.order = 0;
  EnergyAssembly assembly(potential, predictor, predictor_field(domain, ref_spec));
  auto [u, report] = minimize(assembly, ScalarField(domain), settings);
  return {std::move(predictor), std::move(u), report};
}

CorrectorRun solve_corrector(const DomainPtr& domain, const PredictorSpec& spec, const PairPotential& potential,
                             const SolveSettings& settings) {
  return solve_corrector(domain, predictor_field(domain, spec), spec.k, potential, settings);
}

RunDecay decay_of_run(const CorrectorRun& run, const PairPotential& potential, DecayWindow window,
                      int shells_per_octave) {
  return {shell_decay(grad(run.corrector).magnitude(), window, "corrector_gradient", shells_per_octave),
          shell_decay(forces(potential, run.predictor), window, "forces", shells_per_octave),
          shell_decay(linear_residual(run.corrector), window, "linear_residual", shells_per_octave)};
}

namespace {

template <typename F>
void for_far_field(const LatticeDomain& dom, F&& f) {
  const double lo = dom.radius() / 4.0;
  const double hi = dom.radius() / 2.0;
  for (std::size_t i = 0; i < dom.num_interior(); ++i) {
    const Site& m = dom.site(static_cast<int>(i));
    const double r = m.radius();
    if (r >= lo && r <= hi) f(static_cast<int>(i), m, r);
  }
}

}  // namespace

double far_field_amplitude(const ScalarField& corrector) {
  double a = 0.0;
  for_far_field(corrector.domain(), [&](int i, const Site& m, double r) {
    a += corrector[i] * omega(position(m)).w2 / r;
  });
  return a;
}

double far_field_energy(const ScalarField& corrector) {
  double e = 0.0;
  for_far_field(corrector.domain(), [&](int i, const Site&, double) {
    for (double v : grad(corrector, i)) e += v * v;
  });
  return e;
}

C2Calibration calibrate_c2(const DomainPtr& domain, PredictorSpec spec, const PairPotential& potential,
                           const SolveSettings& settings, const CalibrationSettings& cal) {
  if (!(cal.lo < cal.hi)) throw std::invalid_argument("calibrate_c2: empty bracket");
  spec.order = 2;
  C2Calibration out;
  bool failed = false;
  auto amplitude = [&](double c) {
    spec.c2 = c;
    const CorrectorRun run = solve_corrector(domain, spec, potential, settings);
    ++out.solves;
    if (!run.report.converged) failed = true;
    const double a = far_field_amplitude(run.corrector);
    out.samples.emplace_back(c, a);
    return a;
  };

  double lo = cal.lo, hi = cal.hi;
  double flo = amplitude(lo), fhi = amplitude(hi);
  if (flo * fhi > 0.0) {
    const double mid = 0.5 * (lo + hi);
    const double half = 5.0 * (hi - lo);
    lo = mid - half;
    hi = mid + half;
    out.widened = true;
    flo = amplitude(lo);
    fhi = amplitude(hi);
    if (flo * fhi > 0.0) {
      throw std::runtime_error("calibrate_c2: no sign change of the far-field amplitude in [" +
                               std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
  }

  if (flo == 0.0) {
    hi = lo;
  } else if (fhi == 0.0) {
    lo = hi;
  } else {
    const double tol = cal.tol;
    auto done = [tol](double a, double b) { return std::abs(b - a) <= tol * (1.0 + std::abs(a)); };
    std::uintmax_t iters = static_cast<std::uintmax_t>(cal.max_iter);
    auto f = [&](double c) {
      if (c == lo) return flo;
      if (c == hi) return fhi;
      return amplitude(c);
    };
    const auto bracket = boost::math::tools::bisect(f, lo, hi, done, iters);
    lo = bracket.first;
    hi = bracket.second;
    out.iterations = static_cast<int>(iters);
  }
  if (failed) throw std::runtime_error("calibrate_c2: a corrector solve did not converge");
  out.lo = lo;
  out.hi = hi;
  out.c2 = 0.5 * (lo + hi);
  return out;
}

double energy_norm_difference(const ScalarField& coarse, const ScalarField& reference, const LatticeDomain* region) {
  const auto& cd = coarse.domain();
  const auto& rd = reference.domain();
  auto coarse_value = [&](const Site& m) {
    const int i = cd.index_of(m);
    return cd.is_interior(i) ? coarse[i] : 0.0;
  };
  auto ref_value = [&](int i) { return rd.is_interior(i) ? reference[i] : 0.0; };
  auto counted = [&](const Bond& b) {
    if (!region) return true;
    return region->is_interior(region->index_of(rd.site(b.from))) || region->is_interior(region->index_of(rd.site(b.to)));
  };
  double s = 0.0;
  for (const Bond& b : rd.bonds()) {
    if (!counted(b)) continue;
    const double e = (ref_value(b.to) - coarse_value(rd.site(b.to))) -
                     (ref_value(b.from) - coarse_value(rd.site(b.from)));
    s += e * e;
  }
  // Bonds of the coarse domain lying outside the reference one cannot occur
  // because the coarse ball is contained in the reference ball.
  return std::sqrt(s);
}

ConvergenceReport convergence_study(std::vector<double> radii, const PredictorSpec& spec,
                                    const PairPotential& potential, const SolveSettings& settings) {
  if (radii.size() < 3) throw std::invalid_argument("convergence_study: need at least 3 radii");
  if (!std::is_sorted(radii.begin(), radii.end()) ||
      std::adjacent_find(radii.begin(), radii.end()) != radii.end()) {
    throw std::invalid_argument("convergence_study: radii must be strictly increasing");
  }
  spec.validate();

  ConvergenceReport rep;
  rep.order = spec.order;
  rep.c2 = spec.c2;
  rep.reference_radius = radii.back();

  const auto ref_domain = LatticeDomain::create(rep.reference_radius);
  const CorrectorRun ref = solve_corrector(ref_domain, spec, potential, settings);
  rep.converged = ref.report.converged;
  const auto smallest = LatticeDomain::create(radii.front());
  for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
    const auto dom = LatticeDomain::create(radii[i]);
    const CorrectorRun run = solve_corrector(dom, spec, potential, settings);
    rep.converged = rep.converged && run.report.converged;
    rep.radii.push_back(radii[i]);
    rep.errors.push_back(energy_norm_difference(run.corrector, ref.corrector));
    rep.errors_common.push_back(energy_norm_difference(run.corrector, ref.corrector, smallest.get()));
  }
  rep.fitted_order = loglog_slope(rep.radii, rep.errors);
  rep.fitted_order_common = loglog_slope(rep.radii, rep.errors_common);
  return rep;
}

SinclairReport sinclair_experiment(const DomainPtr& domain, int terms, const PredictorSpec& spec,
                                   const PairPotential& potential, const SolveSettings& settings,
                                   const SinclairSettings& sinclair) {
  if (terms < 0) throw std::invalid_argument("sinclair_experiment: terms must be >= 0");
  if (sinclair.grid_points < 2 && terms >= 1) throw std::invalid_argument("sinclair_experiment: grid too small");

  DecayWindow window = sinclair.window;
  if (window.r_max <= 0.0) window.r_max = domain->radius() / 4.0;

  SinclairReport rep;
  rep.terms = terms;
  rep.c2 = spec.c2;

  auto slope_of = [&](const CorrectorRun& run) {
    return shell_decay(grad(run.corrector).magnitude(), window, "corrector_gradient", sinclair.shells_per_octave)
        .slope;
  };

  PredictorSpec order0 = spec;
  order0.order = 0;
  const CorrectorRun base = solve_corrector(domain, order0, potential, settings);
  rep.converged = base.report.converged;
  rep.order0_slope = slope_of(base);
  rep.order0_far_energy = far_field_energy(base.corrector);

  SinclairSeries series;
  series.coefficients.assign(static_cast<std::size_t>(terms) + 1, 0.0);
  series.coefficients[0] = spec.k;

  auto run_series = [&](const SinclairSeries& s) {
    CorrectorRun run = solve_corrector(domain, sinclair_field(domain, s), spec.k, potential, settings);
    rep.converged = rep.converged && run.report.converged;
    return run;
  };
  auto objective = [&](std::size_t j, double c) {
    SinclairSeries s = series;
    s.coefficients[j] = c;
    return far_field_energy(run_series(s).corrector);
  };

  if (terms >= 1) {
    const double step = (sinclair.grid_max - sinclair.grid_min) / (sinclair.grid_points - 1);
    std::size_t best = 0;
    for (int i = 0; i < sinclair.grid_points; ++i) {
      const double c = sinclair.grid_min + i * step;
      rep.scan.push_back({c, objective(1, c)});
      if (rep.scan.back().far_field_energy < rep.scan[best].far_field_energy) best = rep.scan.size() - 1;
    }
    const double c_best = rep.scan[best].c1;
    const auto refined = boost::math::tools::brent_find_minima(
        [&](double c) { return objective(1, c); }, c_best - step, c_best + step, 40);
    series.coefficients[1] = refined.first;
    // Remaining coefficients: one coordinate sweep over the same range.
    for (int j = 2; j <= terms; ++j) {
      const auto r = boost::math::tools::brent_find_minima(
          [&](double c) { return objective(static_cast<std::size_t>(j), c); }, sinclair.grid_min,
          sinclair.grid_max, 40);
      series.coefficients[static_cast<std::size_t>(j)] = r.first;
    }
  }
  rep.coefficients = series.coefficients;

  const CorrectorRun best_run = run_series(series);
  rep.sinclair_slope = slope_of(best_run);
  rep.sinclair_far_energy = far_field_energy(best_run.corrector);
  rep.improvement = rep.order0_slope - rep.sinclair_slope;

  if (spec.c2) {
    PredictorSpec full = spec;
    full.order = 2;
    const CorrectorRun full_run = solve_corrector(domain, full, potential, settings);
    rep.converged = rep.converged && full_run.report.converged;
    rep.full_slope = slope_of(full_run);
  }
  return rep;
}

}  // namespace antiplane
