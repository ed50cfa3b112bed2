#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "antiplane/greens.hpp"

using namespace antiplane;

namespace {

constexpr double kPi = std::numbers::pi;

double linf(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.interior()) m = std::max(m, std::abs(v));
  return m;
}

// Tensor-product midpoint rule for the defining Fourier integral; avoids k = 0.
double g_hom_diff_trapezoid(int m1, int m2, int n) {
  const double h = 2 * kPi / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double k1 = -kPi + (i + 0.5) * h;
    for (int j = 0; j < n; ++j) {
      const double k2 = -kPi + (j + 0.5) * h;
      s += (1.0 - std::cos(k1 * m1 + k2 * m2)) / (4.0 - 2.0 * std::cos(k1) - 2.0 * std::cos(k2));
    }
  }
  return s * h * h / (4 * kPi * kPi);
}

Site random_site(std::mt19937_64& rng, double rmax) {
  std::uniform_int_distribution<int> u(-static_cast<int>(rmax), static_cast<int>(rmax));
  for (;;) {
    const Site m{u(rng), u(rng)};
    if (m.radius() <= rmax) return m;
  }
}

}  // namespace

TEST_CASE("homogeneous Green's function differences") {
  CHECK(g_hom_diff(0, 0) == 0.0);
  CHECK(std::abs(g_hom_diff(1, 0) - 0.25) <= 1e-10);
  CHECK(std::abs(g_hom_diff(1, 1) - 1.0 / kPi) <= 1e-8);
  // Half the two-point resistances of the unit-resistor square lattice.
  CHECK(g_hom_diff(2, 0) == doctest::Approx(1.0 - 2.0 / kPi).epsilon(1e-12));
  CHECK(g_hom_diff(2, 1) == doctest::Approx(2.0 / kPi - 0.25).epsilon(1e-12));
  CHECK(g_hom_diff(2, 2) == doctest::Approx(4.0 / (3.0 * kPi)).epsilon(1e-12));
  // Lattice symmetries.
  CHECK(g_hom_diff(-3, 5) == g_hom_diff(5, 3));
  CHECK(g_hom_diff(3, -5) == g_hom_diff(3, 5));
  // Defining equation: unit source at the origin, harmonic elsewhere.
  double sum = 0.0;
  for (const auto& o : kOffsets) sum += g_hom_diff(o[0], o[1]);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  for (const Site& m : {Site{2, 1}, Site{3, 0}, Site{5, 4}, Site{7, -2}}) {
    double h = 0.0;
    for (const auto& o : kOffsets) h += g_hom_diff(m.a, m.b) - g_hom_diff(m.a + o[0], m.b + o[1]);
    CHECK(std::abs(h) <= 1e-10);
  }
  // Independent low-order quadrature of the two-dimensional integral.
  for (const Site& m : {Site{1, 0}, Site{3, 2}}) {
    const double coarse = g_hom_diff_trapezoid(m.a, m.b, 400);
    const double fine = g_hom_diff_trapezoid(m.a, m.b, 800);
    CHECK(std::abs(fine - g_hom_diff(m.a, m.b)) < std::abs(coarse - g_hom_diff(m.a, m.b)) + 1e-12);
    CHECK(std::abs(fine - g_hom_diff(m.a, m.b)) < 1e-4);
  }
}

TEST_CASE("G0hat symmetry, singularity and crack consistency") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const Site m = random_site(rng, 40.0), s = random_site(rng, 40.0);
    if (m == s) continue;
    CHECK(std::abs(g_hat0(m, s) - g_hat0(s, m)) <= 1e-14 * std::max(1.0, std::abs(g_hat0(m, s))));
  }
  CHECK_THROWS_AS(g_hat0({3, 4}, {3, 4}), std::domain_error);

  const Site s{2, 6};
  for (int k : {2, 4, 8, 16}) {
    const Site m{-k, 1};
    const double across = std::abs(g_hat0(m, s) - g_hat0(mirror(m), s));
    const double along = std::abs(g_hat0(m, s) - g_hat0({-k - 1, 1}, s));
    CHECK(across > 0.05);
    CHECK(along < across / 10);
  }
}

TEST_CASE("G0hat mixed differences obey the decay bound") {
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int i = 0; i < 300; ++i) {
    const Site m = random_site(rng, 60.0), s = random_site(rng, 60.0);
    if ((m.radius() < 2) || (s.radius() < 2)) continue;
    const Omega wm = omega(position(m)), ws = omega(position(s));
    const double dw = std::hypot(wm.w1 - ws.w1, wm.w2 - ws.w2);
    if (dw < 1.0) continue;
    double mixed = 0.0;
    for (int k = 0; k < kNumDirections; ++k) {
      if (!bond_active(m, k)) continue;
      for (int l = 0; l < kNumDirections; ++l) {
        if (!bond_active(s, l)) continue;
        const Site m2 = shift(m, k), s2 = shift(s, l);
        if (m2 == s || m == s2 || m2 == s2) continue;
        mixed = std::max(mixed, std::abs(g_hat0(m2, s2) - g_hat0(m2, s) - g_hat0(m, s2) + g_hat0(m, s)));
      }
    }
    const double bound = 1.0 / (1.0 + std::sqrt(m.radius() * s.radius()) * dw * dw);
    worst = std::max(worst, mixed / bound);
  }
  CHECK(worst > 0.0);
  CHECK(worst < 1.0);
}

TEST_CASE("crack Green's column: residual, decomposition, mirror symmetry") {
  const auto d = LatticeDomain::create(64.0);
  const CrackGreenSolver solver(d);
  const Site s{4, 9};
  const GreensColumn c = solver.column(s);
  CHECK(c.residual_linf <= 1e-9);
  ScalarField delta(d);
  delta[static_cast<std::size_t>(d->index_of(s))] = 1.0;
  CHECK(linf(neg_laplacian(c.full) - delta) <= 1e-9);
  CHECK(std::isnan(c.hat0.at(s)));
  CHECK(std::isnan(c.remainder.at(s)));
  for (std::size_t i = 0; i < d->size(); ++i) {
    if (d->site(static_cast<int>(i)) == s) continue;
    CHECK(c.full[i] == doctest::Approx(c.hat0[i] + c.hat1_mu[i] + c.remainder[i]).epsilon(1e-14).scale(1e-14));
  }
  const GreensColumn cm = solver.column(mirror(s));
  for (std::size_t i = 0; i < d->num_interior(); ++i) {
    const Site& m = d->site(static_cast<int>(i));
    CHECK(std::abs(cm.full.at(mirror(m)) - c.full[i]) <= 1e-10);
  }
  CHECK_THROWS_AS(solver.column({40, 1}), std::invalid_argument);
  CHECK_THROWS_AS(solver.column({200, 1}), std::invalid_argument);
  const GreensColumn direct = solve_crack_green(s, d);
  CHECK(linf(direct.full - c.full) <= 1e-12);
}

TEST_CASE("Green's function symmetry at R = 128") {
  const auto d = LatticeDomain::create(128.0);
  const std::vector<Site> sites{{1, 1}, {0, 0}, {5, 7}, {-10, 3}, {12, -8}, {-20, -1}, {30, 2}, {-5, 25}, {-25, 12}};
  for (const Site& m : sites) REQUIRE(m.radius() <= 32.0);
  const CrackGreenSolver solver(d);
  CHECK(green_symmetry_defect(solver, sites) <= 1e-4);
  // Plain G0hat far-field data is truncation limited at a coarser level.
  const CrackGreenSolver plain(d, GreenBoundary::kHat0);
  const double coarse = green_symmetry_defect(plain, sites);
  CHECK(coarse < 1e-2);
  CHECK(coarse > green_symmetry_defect(solver, sites));
}

TEST_CASE("G approaches G0hat away from the source") {
  const auto d = LatticeDomain::create(128.0);
  const CrackGreenSolver solver(d, GreenBoundary::kHat0);
  const GreensColumn c = solver.column({3, 4}, CutoffProfile::zero());
  for (int sign : {-1, 1}) {
    double prev = INFINITY;
    for (int a : {16, 32, 64, 100, 120}) {
      const Site m{sign * a, 1};
      const double rem = std::abs(c.remainder.at(m));
      CHECK(rem < prev);
      CHECK(rem < 0.01 * std::abs(c.hat0.at(m)));
      prev = rem;
    }
  }
}

TEST_CASE("discrete geometry corrector") {
  const auto d = LatticeDomain::create(128.0);
  const CrackGreenSolver solver(d);
  const ScalarField& g1m = solver.g_hat1_m();
  const ScalarField pcg = g_hat1_m(d);
  CHECK(linf(pcg - g1m) <= 1e-8);
  for (std::size_t i = d->num_interior(); i < d->size(); ++i) CHECK(g1m[i] == 0.0);

  // Product structure: -Div D (G1m G1s(s)) = G1s(s) Div D w2.
  const auto w2 = ScalarField::from_function(d, [](const Site& m) { return omega(position(m)).w2; });
  ScalarField div_d_w2 = neg_laplacian(w2);
  div_d_w2 *= -1.0;
  const Site s{20, 30};
  const double gs = g_hat1_s(s);
  const ScalarField lhs = neg_laplacian(gs * g1m);
  const ScalarField rhs = gs * div_d_w2;
  CHECK(linf(lhs - rhs) <= 1e-8 * linf(rhs));

  // Decay: right-hand side ~ r^{-7/2}, gradient ~ r^{-3/2}, value ~ r^{-1/2}.
  ScalarField abs_rhs(d), abs_val(d);
  for (std::size_t i = 0; i < d->num_interior(); ++i) {
    abs_rhs[i] = std::abs(div_d_w2[i]);
    abs_val[i] = std::abs(g1m[i]);
  }
  CHECK(shell_decay(abs_rhs, DecayWindow::standard(128.0)).slope == doctest::Approx(-3.5).epsilon(0.3 / 3.5));
  CHECK(shell_decay(grad(g1m).magnitude(), {8.0, 32.0}).slope == doctest::Approx(-1.5).epsilon(0.3 / 1.5));
  CHECK(shell_decay(abs_val, {8.0, 32.0}).slope == doctest::Approx(-0.5).epsilon(0.3 / 0.5));
}

TEST_CASE("quadratic corrector equals K times the discrete geometry corrector") {
  const auto d = LatticeDomain::create(64.0);
  PredictorSpec spec;
  spec.k = 0.4;
  const CorrectorRun run = solve_corrector(d, spec, PairPotential::quadratic(), {});
  const CrackGreenSolver solver(d);
  CHECK(linf(run.corrector - 0.4 * solver.g_hat1_m()) <= 1e-7);
}

TEST_CASE("source factor") {
  CHECK(g_hat1_s(Point{0.0, 4.0}) == doctest::Approx(-std::sqrt(2.0) / 2).epsilon(1e-14));
  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    const Site s = random_site(rng, 50.0);
    CHECK(g_hat1_s(mirror(s)) == -g_hat1_s(s));
    CHECK(std::abs(g_hat1_s(s)) <= 2.0 / std::sqrt(s.radius()) + 1e-15);
  }
  CHECK(kGreenScale == doctest::Approx(-1.0 / (4 * kPi)).epsilon(1e-15));
}

TEST_CASE("cutoff profile and mu") {
  const CutoffProfile p = CutoffProfile::quintic();
  for (double t = 0.0; t <= 0.5; t += 0.01) CHECK(p(t) == 1.0);
  for (double t = 1.0; t <= 3.0; t += 0.05) CHECK(p(t) == 0.0);
  double prev = 1.0;
  for (double t = 0.5; t <= 1.0; t += 0.001) {
    CHECK(p(t) <= prev);
    prev = p(t);
  }
  const double h = 1e-6;
  for (double t : {0.5, 1.0}) {
    CHECK(std::abs(p(t + h) - p(t)) / h < 1e-4);
    CHECK(std::abs(p(t) - p(t - h)) / h < 1e-4);
  }
  CHECK(p(0.75) == doctest::Approx(0.5));
  CHECK(CutoffProfile::zero()(0.0) == 0.0);

  const Site s{1, 101};  // |s| ~ 100
  const double rs = std::sqrt(s.radius());
  for (int a = 1; a < 20; ++a) {
    const Site m{a, 1};
    if (m.radius() <= 0.5 * rs) CHECK(mu_cutoff(m, s, p) == 1.0);
    if (m.radius() >= rs) CHECK(mu_cutoff(m, s, p) == 0.0);
    CHECK(mu_cutoff({a + 1, 1}, s, p) <= mu_cutoff(m, s, p));
  }
}

TEST_CASE("remainder diagnostic") {
  const auto d = LatticeDomain::create(264.0);
  const CrackGreenSolver solver(d);
  CHECK_THROWS_AS(gbar1_statistic(solver, {1, 60}, CutoffProfile::quintic()), std::invalid_argument);
  const Site s = ray_sources({128}).front();
  CHECK(s == Site{1, 129});

  // With mu == 0 the remainder is G - G0hat exactly.
  const GreensColumn c = solver.column(s, CutoffProfile::zero());
  for (std::size_t i = 0; i < d->size(); ++i) {
    if (d->site(static_cast<int>(i)) == s) continue;
    CHECK(c.remainder[i] == c.full[i] - c.hat0[i]);
  }
  const Gbar1Sample g0 = gbar1_statistic(solver, s, CutoffProfile::zero());
  const Gbar1Sample g1 = gbar1_statistic(solver, s, CutoffProfile::quintic());
  CHECK(g0.sites == g1.sites);
  CHECK(g0.sites > 0);
  CHECK(g0.statistic > 0.0);
  CHECK(g1.statistic > 0.0);
  CHECK_THROWS(gbar1_diagnostic({s}, solver, CutoffProfile::zero()));
}
