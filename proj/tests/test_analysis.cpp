#include "doctest.h"

#include <cmath>

#include "antiplane/analysis.hpp"

using namespace antiplane;

namespace {

PredictorSpec spec(double k, int order = 0, std::optional<double> c2 = std::nullopt) {
  PredictorSpec s;
  s.k = k;
  s.order = order;
  s.c2 = c2;
  return s;
}

double amplitude_at(const DomainPtr& d, const PairPotential& pot, double c) {
  return far_field_amplitude(solve_corrector(d, spec(0.4, 2, c), pot, {}).corrector);
}

}  // namespace

TEST_CASE("loglog slope of an exact power law") {
  CHECK(loglog_slope({1.0, 2.0, 4.0}, {1.0, 0.25, 0.0625}) == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK_THROWS(loglog_slope({1.0}, {1.0}));
}

TEST_CASE("shell_decay recovers synthetic exponents") {
  const auto d = LatticeDomain::create(128.0);
  for (double p : {-0.5, -1.5, -2.5}) {
    const auto f = ScalarField::from_function(d, [p](const Site& m) { return std::pow(m.radius(), p); });
    const DecayReport r = shell_decay(f, DecayWindow::standard(128.0), "synthetic");
    CHECK(r.slope == doctest::Approx(p).epsilon(0.05 / std::abs(p)));
    CHECK(r.fitted_shells >= 3);
    CHECK(r.label == "synthetic");
    for (const Shell& s : r.shells) {
      CHECK(s.r_lo < s.r_hi);
      CHECK(s.mean <= s.max * (1 + 1e-12));
      CHECK(s.count > 0);
    }
  }
}

TEST_CASE("shell_decay window validation") {
  const auto d = LatticeDomain::create(64.0);
  const ScalarField f = ScalarField::from_function(d, [](const Site& m) { return 1.0 / m.radius(); });
  CHECK_THROWS_AS(shell_decay(f, {1.0, 16.0}), std::invalid_argument);
  CHECK_THROWS_AS(shell_decay(f, {16.0, 40.0}), std::invalid_argument);
  CHECK_THROWS_AS(shell_decay(f, {16.0, 20.0}), std::invalid_argument);
  CHECK_THROWS_AS(shell_decay(f, {16.0, 32.0}, "", 0), std::invalid_argument);
  CHECK_NOTHROW(shell_decay(f, {16.0, 32.0}));
  const DecayReport zero = shell_decay(ScalarField(d), {16.0, 32.0});
  CHECK(std::isnan(zero.slope));
}

TEST_CASE("default windows") {
  CHECK(DecayWindow::for_radius(128.0).r_min == 16.0);
  CHECK(DecayWindow::for_radius(128.0).r_max == 32.0);
  CHECK(DecayWindow::for_radius(64.0).r_min == 8.0);
  CHECK(DecayWindow::for_radius(64.0).r_max == 32.0);
}

TEST_CASE("energy norm difference") {
  const auto a = LatticeDomain::create(16.0);
  const auto b = LatticeDomain::create(32.0);
  const auto fa = ScalarField::from_function(a, [](const Site& m) { return std::sin(0.3 * m.a) * m.b; }, Clamp::zero());
  const auto fb = ScalarField::from_function(b, [&](const Site& m) {
    const int i = a->index_of(m);
    return a->is_interior(i) ? fa[static_cast<std::size_t>(i)] : 0.0;
  }, Clamp::zero());
  CHECK(energy_norm_difference(fa, fb) == doctest::Approx(0.0).scale(1e-14));
  CHECK(energy_norm_difference(fb, fb) == 0.0);
  const ScalarField zero(a);
  CHECK(energy_norm_difference(zero, fb) == doctest::Approx(std::sqrt(dirichlet_product(fb, fb))).epsilon(1e-13));
}

TEST_CASE("calibrate_c2: reproducibility, widening, monotonicity") {
  const auto d = LatticeDomain::create(32.0);
  const auto pot = PairPotential::gaussian();
  const C2Calibration a = calibrate_c2(d, spec(0.4), pot, {});
  CalibrationSettings other;
  other.lo = -0.3;
  other.hi = 2.0;
  const C2Calibration b = calibrate_c2(d, spec(0.4), pot, {}, other);
  CHECK_FALSE(a.widened);
  CHECK(std::abs(a.c2 - b.c2) <= 1e-6 * (1 + std::abs(a.c2)));
  CHECK(a.lo <= a.c2);
  CHECK(a.c2 <= a.hi);
  CHECK(std::abs(amplitude_at(d, pot, a.c2)) <= 1e-4 * std::abs(amplitude_at(d, pot, 0.0)));

  CalibrationSettings off;
  off.lo = 2.0;
  off.hi = 3.0;
  const C2Calibration w = calibrate_c2(d, spec(0.4), pot, {}, off);
  CHECK(w.widened);
  CHECK(std::abs(w.c2 - a.c2) <= 1e-6 * (1 + std::abs(a.c2)));
  off.lo = 5.0;
  off.hi = 6.0;
  CHECK_THROWS_AS(calibrate_c2(d, spec(0.4), pot, {}, off), std::runtime_error);

  // a(C) is monotone and nearly affine around the root.
  const double h = 0.05;
  const double am = amplitude_at(d, pot, a.c2 - h);
  const double a0 = amplitude_at(d, pot, a.c2);
  const double ap = amplitude_at(d, pot, a.c2 + h);
  CHECK(am > a0);
  CHECK(a0 > ap);
  CHECK(std::abs(ap - 2 * a0 + am) <= 0.05 * std::abs(ap - am));
}

TEST_CASE("calibrate_c2 with the quadratic potential matches the affine root") {
  const auto d = LatticeDomain::create(32.0);
  const auto pot = PairPotential::quadratic();
  const double a0 = amplitude_at(d, pot, 0.0);
  const double a1 = amplitude_at(d, pot, 1.0);
  const double root = -a0 / (a1 - a0);
  const C2Calibration c = calibrate_c2(d, spec(0.4), pot, {});
  CHECK(c.c2 == doctest::Approx(root).epsilon(1e-7));
}

TEST_CASE("calibrated C2 improves the order-2 decay") {
  const auto d = LatticeDomain::create(128.0);
  const auto pot = PairPotential::gaussian();
  const double c2 = calibrate_c2(d, spec(0.4), pot, {}).c2;
  const auto window = DecayWindow::standard(128.0);
  const auto slope = [&](double c) {
    return decay_of_run(solve_corrector(d, spec(0.4, 2, c), pot, {}), pot, window).corrector_gradient.slope;
  };
  CHECK(slope(c2) <= slope(0.0) - 0.5);
}

TEST_CASE("convergence study") {
  const auto pot = PairPotential::gaussian();
  CHECK_THROWS_AS(convergence_study({16.0, 32.0}, spec(0.4), pot, {}), std::invalid_argument);
  CHECK_THROWS_AS(convergence_study({32.0, 16.0, 64.0}, spec(0.4), pot, {}), std::invalid_argument);

  const std::vector<double> radii{16.0, 32.0, 64.0, 128.0};
  const ConvergenceReport r0 = convergence_study(radii, spec(0.4), pot, {});
  CHECK(r0.converged);
  CHECK(r0.reference_radius == 128.0);
  REQUIRE(r0.errors.size() == 3);
  for (std::size_t i = 1; i < r0.errors.size(); ++i) CHECK(r0.errors[i] <= 1.05 * r0.errors[i - 1]);
  CHECK(r0.fitted_order == doctest::Approx(-0.5).epsilon(0.5));

  const double c2 = calibrate_c2(LatticeDomain::create(128.0), spec(0.4), pot, {}).c2;
  const ConvergenceReport r2 = convergence_study(radii, spec(0.4, 2, c2), pot, {});
  for (std::size_t i = 1; i < r2.errors.size(); ++i) CHECK(r2.errors[i] <= 1.05 * r2.errors[i - 1]);
  CHECK(r2.fitted_order <= -0.9);

  const ConvergenceReport r1 = convergence_study(radii, spec(0.4, 2, 0.0), pot, {});
  CHECK(r1.fitted_order == doctest::Approx(-0.5).epsilon(0.5));
}

TEST_CASE("Sinclair experiment with no extra terms reproduces order 0") {
  const auto d = LatticeDomain::create(64.0);
  const auto pot = PairPotential::gaussian();
  SinclairSettings s;
  s.window = DecayWindow::for_radius(64.0);
  const SinclairReport r = sinclair_experiment(d, 0, spec(0.4), pot, {}, s);
  CHECK(r.sinclair_slope == doctest::Approx(r.order0_slope).epsilon(1e-6));
  CHECK(std::abs(r.improvement) <= 1e-6);
  CHECK(r.coefficients == std::vector<double>{0.4});
  CHECK_FALSE(r.full_slope);
  CHECK_THROWS(sinclair_experiment(d, -1, spec(0.4), pot, {}, s));
}

TEST_CASE("Sinclair single coefficient scan") {
  const auto d = LatticeDomain::create(64.0);
  const auto pot = PairPotential::gaussian();
  SinclairSettings s;
  s.window = DecayWindow::for_radius(64.0);
  s.grid_points = 9;
  const SinclairReport r = sinclair_experiment(d, 1, spec(0.4, 0, 0.136), pot, {}, s);
  CHECK(r.converged);
  CHECK(r.scan.size() == 9);
  double best = r.scan.front().far_field_energy;
  for (const auto& x : r.scan) best = std::min(best, x.far_field_energy);
  CHECK(r.sinclair_far_energy <= best * (1 + 1e-9));
  CHECK(r.sinclair_far_energy <= r.order0_far_energy);
  REQUIRE(r.full_slope);
  CHECK(*r.full_slope <= -2.0);
}
