#include "antiplane/solver.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace antiplane {

void SolveSettings::validate() const {
  if (!(tol_linf > 0.0)) throw std::invalid_argument("SolveSettings: tol_linf must be positive");
  if (max_iter <= 0) throw std::invalid_argument("SolveSettings: max_iter must be positive");
  if (!(0.0 < wolfe_c1 && wolfe_c1 < wolfe_c2 && wolfe_c2 < 1.0)) {
    throw std::invalid_argument("SolveSettings: need 0 < c1 < c2 < 1");
  }
  if (!(linear_tol > 0.0)) throw std::invalid_argument("SolveSettings: linear_tol must be positive");
}

namespace {

double dot(std::span<const double> a, std::span<const double> b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double norm_inf(std::span<const double> a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s = std::max(s, std::abs(a[i]));
  return s;
}

// Minimiser of the cubic interpolating (a, fa, ga), (b, fb, gb), safeguarded
// into the inner part of [lo, hi].
double cubic_step(double a, double fa, double ga, double b, double fb, double gb) {
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  const double d1 = ga + gb - 3.0 * (fa - fb) / (a - b);
  const double disc = d1 * d1 - ga * gb;
  double t = 0.5 * (a + b);
  if (disc >= 0.0) {
    const double d2 = std::copysign(std::sqrt(disc), b - a);
    const double denom = gb - ga + 2.0 * d2;
    if (denom != 0.0) t = b - (b - a) * (gb + d2 - d1) / denom;
  }
  const double margin = 0.1 * (hi - lo);
  if (!std::isfinite(t) || t < lo + margin || t > hi - margin) t = 0.5 * (a + b);
  return t;
}

struct LineSearchResult {
  double step = 0.0;
  double change = 0.0;
  bool ok = false;
};

// Strong Wolfe search on phi(t) = E(u + t d) - E(u).
LineSearchResult strong_wolfe(const EnergyAssembly& asmb, std::span<const double> u, std::span<const double> d,
                              double dphi0, double t_init, const SolveSettings& s) {
  auto phi = [&](double t) { return asmb.energy_change(u, d, t); };
  auto dphi = [&](double t) { return asmb.directional_derivative(u, d, t); };

  auto zoom = [&](double lo, double flo, double glo, double hi, double fhi, double ghi, int budget) {
    for (int i = 0; i < budget; ++i) {
      const double t = cubic_step(lo, flo, glo, hi, fhi, ghi);
      const double ft = phi(t);
      const double gt = dphi(t);
      if (ft > s.wolfe_c1 * t * dphi0 || ft >= flo) {
        hi = t, fhi = ft, ghi = gt;
      } else {
        if (std::abs(gt) <= -s.wolfe_c2 * dphi0) return LineSearchResult{t, ft, true};
        if (gt * (hi - lo) >= 0.0) hi = lo, fhi = flo, ghi = glo;
        lo = t, flo = ft, glo = gt;
      }
      if (std::abs(hi - lo) <= 1e-14 * std::max(1.0, std::abs(lo))) break;
    }
    // Accept the best sufficient-decrease point found.
    if (lo > 0.0 && flo <= s.wolfe_c1 * lo * dphi0) return LineSearchResult{lo, flo, true};
    return LineSearchResult{};
  };

  double t_prev = 0.0, f_prev = 0.0, g_prev = dphi0;
  double t = t_init;
  for (int i = 0; i < s.max_linesearch; ++i) {
    const double ft = phi(t);
    const double gt = dphi(t);
    if (!std::isfinite(ft) || !std::isfinite(gt)) {
      t = 0.5 * (t_prev + t);
      continue;
    }
    if (ft > s.wolfe_c1 * t * dphi0 || (i > 0 && ft >= f_prev)) {
      return zoom(t_prev, f_prev, g_prev, t, ft, gt, s.max_linesearch);
    }
    if (std::abs(gt) <= -s.wolfe_c2 * dphi0) return LineSearchResult{t, ft, true};
    if (gt >= 0.0) return zoom(t, ft, gt, t_prev, f_prev, g_prev, s.max_linesearch);
    t_prev = t, f_prev = ft, g_prev = gt;
    t *= 4.0;
  }
  return LineSearchResult{};
}

}  // namespace

struct LaplacianFactor::Impl {
  std::size_t n = 0;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
};

LaplacianFactor::LaplacianFactor(const LatticeDomain& domain) : impl_(std::make_unique<Impl>()) {
  const std::size_t n = domain.num_interior();
  impl_->n = n;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(domain.bonds().size() * 4);
  for (const Bond& b : domain.bonds()) {
    // Bond (i -> j) contributes (x_j - x_i) e_j - (x_j - x_i) e_i.
    const bool to_in = domain.is_interior(b.to);
    const bool from_in = domain.is_interior(b.from);
    if (to_in) {
      trips.emplace_back(b.to, b.to, 1.0);
      if (from_in) trips.emplace_back(b.to, b.from, -1.0);
    }
    if (from_in) {
      trips.emplace_back(b.from, b.from, 1.0);
      if (to_in) trips.emplace_back(b.from, b.to, -1.0);
    }
  }
  Eigen::SparseMatrix<double> a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  a.setFromTriplets(trips.begin(), trips.end());
  impl_->llt.compute(a);
  if (impl_->llt.info() != Eigen::Success) throw std::runtime_error("LaplacianFactor: factorisation failed");
}

LaplacianFactor::~LaplacianFactor() = default;
LaplacianFactor::LaplacianFactor(LaplacianFactor&&) noexcept = default;
LaplacianFactor& LaplacianFactor::operator=(LaplacianFactor&&) noexcept = default;

void LaplacianFactor::solve(std::span<const double> rhs, std::span<double> out) const {
  const auto n = static_cast<Eigen::Index>(impl_->n);
  Eigen::Map<const Eigen::VectorXd> b(rhs.data(), n);
  Eigen::Map<Eigen::VectorXd> x(out.data(), n);
  x = impl_->llt.solve(b);
}

std::pair<ScalarField, SolveReport> minimize(const EnergyAssembly& assembly, const ScalarField& u_init,
                                             const SolveSettings& settings) {
  settings.validate();
  if (&u_init.domain() != &assembly.domain()) throw std::invalid_argument("minimize: field domain mismatch");

  const std::size_t n = assembly.domain().num_interior();
  const std::size_t total = assembly.domain().size();
  const int restart = settings.restart_every > 0 ? settings.restart_every : static_cast<int>(n);

  ScalarField u = u_init;
  for (std::size_t i = n; i < total; ++i) u[i] = 0.0;

  std::unique_ptr<LaplacianFactor> factor;
  if (settings.precondition) factor = std::make_unique<LaplacianFactor>(assembly.domain());
  auto precondition = [&](std::span<const double> g, std::span<double> z) {
    if (factor) {
      factor->solve(g, z);
    } else {
      std::copy(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(n), z.begin());
    }
  };

  std::vector<double> g(total, 0.0), g_new(total, 0.0), z(total, 0.0), z_new(total, 0.0), d(total, 0.0);
  assembly.gradient(u.values(), g);
  precondition(g, z);
  for (std::size_t i = 0; i < n; ++i) d[i] = -z[i];

  SolveReport report;
  double gz = dot(g, z, n);
  double prev_step = 0.0, prev_slope = 0.0;
  int since_restart = 0;
  bool retried = false;

  for (int it = 0; it < settings.max_iter; ++it) {
    report.iterations = it;
    report.residual_linf = norm_inf(g, n);
    if (report.residual_linf <= settings.tol_linf) {
      report.converged = true;
      break;
    }

    double slope = dot(g, d, n);
    if (!(slope < 0.0)) {
      for (std::size_t i = 0; i < n; ++i) d[i] = -z[i];
      slope = -gz;
      since_restart = 0;
    }

    double t0 = 1.0;
    if (prev_step > 0.0) {
      t0 = 1.01 * prev_step * prev_slope / slope;
      if (factor) t0 = std::min(1.0, t0);
    } else if (!factor) {
      t0 = 0.1 / std::max(norm_inf(d, n), 1e-300);
    }
    if (!std::isfinite(t0) || t0 <= 0.0) t0 = 1e-3;

    const LineSearchResult ls = strong_wolfe(assembly, u.values(), d, slope, t0, settings);
    if (!ls.ok) {
      if (retried) {
        report.message = "line search failed";
        break;
      }
      // Retry along the preconditioned steepest descent direction once.
      for (std::size_t i = 0; i < n; ++i) d[i] = -z[i];
      since_restart = 0;
      prev_step = 0.0;
      retried = true;
      continue;
    }
    retried = false;

    for (std::size_t i = 0; i < n; ++i) u[i] += ls.step * d[i];
    prev_step = ls.step;
    prev_slope = slope;

    assembly.gradient(u.values(), g_new);
    precondition(g_new, z_new);
    const double gz_new = dot(g_new, z_new, n);
    double beta = 0.0;
    if (++since_restart < restart) {
      double num = 0.0;
      for (std::size_t i = 0; i < n; ++i) num += z_new[i] * (g_new[i] - g[i]);
      beta = std::max(0.0, num / gz);
    } else {
      since_restart = 0;
    }
    for (std::size_t i = 0; i < n; ++i) d[i] = -z_new[i] + beta * d[i];
    std::swap(g, g_new);
    std::swap(z, z_new);
    gz = gz_new;
  }
  report.residual_linf = norm_inf(g, n);
  if (report.residual_linf <= settings.tol_linf) report.converged = true;
  if (!report.converged && report.message.empty()) report.message = "iteration limit reached";
  if (report.converged) report.message = "converged";
  report.energy = assembly.energy(u);
  return {std::move(u), report};
}

namespace {

// y = -Div D x on the interior, with x treated as zero on the halo.
void apply_laplacian(const LatticeDomain& d, std::span<const double> x, std::span<double> y) {
  std::fill(y.begin(), y.end(), 0.0);
  for (const Bond& b : d.bonds()) {
    const bool to_in = d.is_interior(b.to);
    const bool from_in = d.is_interior(b.from);
    const double v = (to_in ? x[b.to] : 0.0) - (from_in ? x[b.from] : 0.0);
    if (to_in) y[b.to] += v;
    if (from_in) y[b.from] -= v;
  }
}

std::vector<double> laplacian_diagonal(const LatticeDomain& d) {
  std::vector<double> diag(d.num_interior(), 0.0);
  for (const Bond& b : d.bonds()) {
    if (d.is_interior(b.to)) diag[b.to] += 1.0;
    if (d.is_interior(b.from)) diag[b.from] += 1.0;
  }
  return diag;
}

}  // namespace

ScalarField solve_linear_masked(const DomainPtr& domain, const ScalarField& rhs, const Clamp& boundary,
                                const SolveSettings& settings, LinearReport* report) {
  if (&rhs.domain() != domain.get()) throw std::invalid_argument("solve_linear_masked: rhs domain mismatch");
  const auto& d = *domain;
  const std::size_t n = d.num_interior();

  ScalarField u(domain);
  u.apply_clamp(boundary);

  // b = rhs - A_{interior,halo} u_halo.
  std::vector<double> b(n);
  {
    const ScalarField lifted = neg_laplacian(u);
    for (std::size_t i = 0; i < n; ++i) b[i] = rhs[i] - lifted[i];
  }
  const std::vector<double> diag = laplacian_diagonal(d);

  std::vector<double> x(d.size(), 0.0), r(b), z(n), p(d.size(), 0.0), ap(d.size(), 0.0);
  const double bnorm = std::sqrt(dot(b, b, n));
  LinearReport rep;
  if (bnorm == 0.0) {
    rep.converged = true;
  } else {
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    std::copy(z.begin(), z.end(), p.begin());
    double rz = dot(r, z, n);
    for (int it = 1; it <= settings.linear_max_iter; ++it) {
      apply_laplacian(d, p, ap);
      const double alpha = rz / dot(p, ap, n);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * ap[i];
      }
      rep.iterations = it;
      rep.relative_residual = std::sqrt(dot(r, r, n)) / bnorm;
      if (rep.relative_residual <= settings.linear_tol) {
        rep.converged = true;
        break;
      }
      for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
      const double rz_new = dot(r, z, n);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
  }
  if (report) *report = rep;
  if (!rep.converged) throw std::runtime_error("solve_linear_masked: iteration cap exceeded");
  for (std::size_t i = 0; i < n; ++i) u[i] = x[i];
  return u;
}

double stability_check(const EnergyAssembly& assembly, const ScalarField& u, int probes, std::uint64_t seed) {
  if (probes < 1) throw std::invalid_argument("stability_check: probes must be positive");
  const DomainPtr& dom = assembly.domain_ptr();
  const std::size_t n = dom->num_interior();

  SolveSettings inner;
  inner.linear_tol = 1e-12;

  auto l_apply = [&](const ScalarField& v) { return neg_laplacian(v); };
  auto l_dot = [&](const ScalarField& a, const ScalarField& lb) { return dot(a.values(), lb.values(), n); };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  ScalarField v(dom);
  for (std::size_t i = 0; i < n; ++i) v[i] = normal(rng);

  std::vector<ScalarField> basis;
  std::vector<ScalarField> l_basis;
  std::vector<double> alpha, beta;

  ScalarField lv = l_apply(v);
  double nv = std::sqrt(l_dot(v, lv));
  v *= 1.0 / nv;
  lv *= 1.0 / nv;

  for (int j = 0; j < probes && static_cast<std::size_t>(j) < n; ++j) {
    basis.push_back(v);
    l_basis.push_back(lv);
    const ScalarField hv = assembly.hessian_apply(u, v);
    ScalarField w = solve_linear_masked(dom, hv, Clamp::zero(), inner);
    alpha.push_back(dot(v.values(), hv.values(), n));
    // Full reorthogonalisation in the (-Div D) inner product.
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < basis.size(); ++i) {
        const double c = l_dot(w, l_basis[i]);
        for (std::size_t q = 0; q < n; ++q) w[q] -= c * basis[i][q];
      }
    }
    ScalarField lw = l_apply(w);
    const double b = std::sqrt(std::max(0.0, l_dot(w, lw)));
    if (b <= 1e-10 * std::max(1.0, std::abs(alpha.back()))) break;
    beta.push_back(b);
    w *= 1.0 / b;
    lw *= 1.0 / b;
    v = std::move(w);
    lv = std::move(lw);
  }

  const std::size_t m = alpha.size();
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    t(i, i) = alpha[i];
    if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

}  // namespace antiplane
