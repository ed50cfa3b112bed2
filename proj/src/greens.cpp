#include "antiplane/greens.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "antiplane/predictors.hpp"

namespace antiplane {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

double g_hom_diff(int m1, int m2) {
  // Integrating the lattice symbol over k1 in closed form leaves
  //   (1/pi) int_0^pi (1 - t^n cos(m k)) / sqrt(a^2 - 4) dk,
  // a = 4 - 2 cos k, t = (a - sqrt(a^2 - 4)) / 2, n = |m1|.
  // With s = sin(k/2): sqrt(a^2 - 4) = 4 s sqrt(1 + s^2), t = 1 + 2s^2 - 2s sqrt(1 + s^2).
  int n = std::abs(m1);
  int m = std::abs(m2);
  if (n < m) std::swap(n, m);
  if (n == 0) return 0.0;
  auto integrand = [n, m](double k) {
    const double s = std::sin(0.5 * k);
    const double q = std::sqrt(1.0 + s * s);
    const double log_t = std::log1p(2.0 * s * (s - q));
    const double tn = std::exp(n * log_t);
    const double h = std::sin(0.5 * m * k);
    const double num = -std::expm1(n * log_t) + 2.0 * tn * h * h;
    return num / (4.0 * s * q);
  };
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, std::numbers::pi,
                                                                                 20, 1e-15, &err);
  if (!(err <= 1e-12)) throw std::runtime_error("g_hom_diff: quadrature did not converge");
  return v / std::numbers::pi;
}

double g_hat0(const Site& m, const Site& s) {
  if (m == s) throw std::domain_error("g_hat0: m == s");
  const Omega wm = omega(position(m));
  const Omega ws = omega(position(s));
  const double d1 = std::hypot(ws.w1 - wm.w1, ws.w2 - wm.w2);
  const double d2 = std::hypot(-ws.w1 - wm.w1, ws.w2 - wm.w2);
  return -(std::log(d1) + std::log(d2)) / (4.0 * std::numbers::pi);
}

double g_hat1_s(const Point& x) {
  return -2.0 * omega(x).w2 / std::hypot(x.x1, x.x2);
}

double CutoffProfile::operator()(double t) const {
  if (zero_) return 0.0;
  if (t <= 0.5) return 1.0;
  if (t >= 1.0) return 0.0;
  const double u = 2.0 * t - 1.0;
  return 1.0 - u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

double mu_cutoff(const Site& m, const Site& s, const CutoffProfile& profile) {
  const double rs = s.radius();
  if (rs == 0.0) throw std::domain_error("mu_cutoff: s at the origin");
  return profile(m.radius() / std::sqrt(rs));
}

namespace {

ScalarField div_d_omega2(const DomainPtr& domain) {
  const ScalarField w2 = ScalarField::from_function(domain, [](const Site& m) { return omega(position(m)).w2; });
  ScalarField rhs = neg_laplacian(w2);
  rhs *= -1.0;
  return rhs;
}

void check_source(const LatticeDomain& d, const Site& s, const char* who) {
  const int i = d.index_of(s);
  if (!d.is_interior(i)) throw std::invalid_argument(std::string(who) + ": source not interior");
  if (s.radius() > 0.5 * d.radius()) throw std::invalid_argument(std::string(who) + ": source radius exceeds R/2");
}

}  // namespace

ScalarField g_hat1_m(const DomainPtr& domain, const SolveSettings& settings) {
  return solve_linear_masked(domain, div_d_omega2(domain), Clamp::zero(), settings);
}

CrackGreenSolver::CrackGreenSolver(DomainPtr domain, GreenBoundary boundary)
    : domain_(std::move(domain)), factor_(*domain_), boundary_(boundary) {}

const ScalarField& CrackGreenSolver::g_hat1_m() const {
  if (!g1m_) {
    const ScalarField rhs = div_d_omega2(domain_);
    ScalarField u(domain_);
    factor_.solve(rhs.interior(), u.interior());
    g1m_ = std::move(u);
  }
  return *g1m_;
}

GreensColumn CrackGreenSolver::column(const Site& s, const CutoffProfile& profile) const {
  const auto& d = *domain_;
  check_source(d, s, "CrackGreenSolver::column");
  const std::size_t n = d.num_interior();

  ScalarField hat0 = ScalarField::from_function(domain_, [&](const Site& m) { return m == s ? kNaN : g_hat0(m, s); });

  // Lift the Dirichlet data into the right-hand side.
  ScalarField g(domain_);
  // Far-field data; the symmetric option adds the discrete geometry term with
  // the roles of m and s exchanged, G1s(m) G1m(s), which G(m, s) = G(s, m) implies.
  const double g1m_s = boundary_ == GreenBoundary::kSymmetric ? g_hat1_m()[d.index_of(s)] : 0.0;
  for (std::size_t i = n; i < d.size(); ++i) {
    g[i] = hat0[i] + kGreenScale * g_hat1_s(d.site(static_cast<int>(i))) * g1m_s;
  }
  const ScalarField lifted = neg_laplacian(g);
  std::vector<double> rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = -lifted[i];
  rhs[static_cast<std::size_t>(d.index_of(s))] += 1.0;
  factor_.solve(rhs, g.interior());

  ScalarField res = neg_laplacian(g);
  res[static_cast<std::size_t>(d.index_of(s))] -= 1.0;
  double r = 0.0;
  for (double v : res.interior()) r = std::max(r, std::abs(v));

  ScalarField hat1(domain_);
  if (!profile.is_zero()) {
    const ScalarField& g1m = g_hat1_m();
    const double gs = kGreenScale * g_hat1_s(s);
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double mu = mu_cutoff(d.site(static_cast<int>(i)), s, profile);
      if (mu != 0.0) hat1[i] = mu * g1m[i] * gs;
    }
  }
  ScalarField rem = g - hat0 - hat1;
  return {s, std::move(g), std::move(hat0), std::move(hat1), std::move(rem), r};
}

GreensColumn solve_crack_green(const Site& s, const DomainPtr& domain, const CutoffProfile& profile,
                               GreenBoundary boundary) {
  check_source(*domain, s, "solve_crack_green");
  return CrackGreenSolver(domain, boundary).column(s, profile);
}

double green_symmetry_defect(const CrackGreenSolver& solver, const std::vector<Site>& sites) {
  std::vector<GreensColumn> cols;
  cols.reserve(sites.size());
  for (const Site& s : sites) cols.push_back(solver.column(s, CutoffProfile::zero()));
  double worst = 0.0;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    for (std::size_t j = i + 1; j < sites.size(); ++j) {
      worst = std::max(worst, std::abs(cols[j].full.at(sites[i]) - cols[i].full.at(sites[j])));
    }
  }
  return worst;
}

Gbar1Sample gbar1_statistic(const CrackGreenSolver& solver, const Site& s, const CutoffProfile& profile) {
  const auto& d = solver.domain_ptr();
  const double rs = s.radius();
  if (rs < 128.0) throw std::invalid_argument("gbar1_statistic: |s|/16 must be at least 8");
  const Site s2 = shift(s, static_cast<int>(Direction::kE2));
  const GreensColumn c1 = solver.column(s, profile);
  const GreensColumn c2 = solver.column(s2, profile);
  const ScalarField diff = c2.remainder - c1.remainder;

  Gbar1Sample out{s, rs, 0.0, 0};
  const double lmax = rs / 16.0;
  for (std::size_t i = 0; i < d->num_interior(); ++i) {
    const Site& l = d->site(static_cast<int>(i));
    const double rl = l.radius();
    if (rl > lmax) continue;
    double sq = 0.0;
    for (double v : grad(diff, static_cast<int>(i))) sq += v * v;
    out.statistic = std::max(out.statistic, std::sqrt(sq * rl));
    ++out.sites;
  }
  return out;
}

std::vector<Site> ray_sources(const std::vector<int>& radii) {
  std::vector<Site> out;
  out.reserve(radii.size());
  for (int r : radii) out.push_back({1, r + 1});
  return out;
}

DecayReport gbar1_diagnostic(const std::vector<Site>& sources, const CrackGreenSolver& solver,
                             const CutoffProfile& profile) {
  if (sources.size() < 2) throw std::invalid_argument("gbar1_diagnostic: need at least 2 sources");
  DecayReport rep;
  rep.label = profile.is_zero() ? "gbar0_mixed_difference" : "gbar1_mixed_difference";
  rep.shells_per_octave = 0;
  rep.window = {std::numeric_limits<double>::infinity(), 0.0};
  std::vector<double> xs, ys;
  for (const Site& s : sources) {
    const Gbar1Sample g = gbar1_statistic(solver, s, profile);
    Shell sh;
    sh.r_lo = sh.r_hi = sh.r_mid = g.source_radius;
    sh.max = sh.mean = g.statistic;
    sh.count = g.sites;
    rep.shells.push_back(sh);
    rep.window.r_min = std::min(rep.window.r_min, g.source_radius);
    rep.window.r_max = std::max(rep.window.r_max, g.source_radius);
    xs.push_back(g.source_radius);
    ys.push_back(g.statistic);
  }
  rep.fitted_shells = static_cast<int>(xs.size());
  rep.slope = loglog_slope(xs, ys);
  return rep;
}

}  // namespace antiplane
