#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>

#include "antiplane/lattice.hpp"
#include "antiplane/potential.hpp"

namespace antiplane {

struct SolveSettings {
  /// Stop once the l-infinity norm of the energy gradient is at most this.
  double tol_linf = 1e-8;
  int max_iter = 50000;
  /// Strong Wolfe constants.
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.1;
  int max_linesearch = 40;
  /// Polak-Ribiere restart period; 0 means the number of free sites.
  int restart_every = 0;
  /// Precondition the nonlinear CG directions with the masked Laplacian
  /// -Div D (sparse Cholesky factorisation of the clamped operator).
  bool precondition = true;
  /// Relative l2 residual for linear solves.
  double linear_tol = 1e-10;
  int linear_max_iter = 100000;

  void validate() const;
};

struct SolveReport {
  int iterations = 0;
  double residual_linf = 0.0;
  double energy = 0.0;
  bool converged = false;
  std::string message;
};

/// Nonlinear conjugate gradient (Polak-Ribiere+, strong Wolfe line search)
/// on the interior values of u. Returns the last iterate even when not converged.
/// Every accepted step decreases the energy.
std::pair<ScalarField, SolveReport> minimize(const EnergyAssembly& assembly, const ScalarField& u_init,
                                             const SolveSettings& settings = {});

/// Sparse Cholesky factorisation of -Div D restricted to the interior of a
/// domain (zero Dirichlet halo).
class LaplacianFactor {
 public:
  explicit LaplacianFactor(const LatticeDomain& domain);
  ~LaplacianFactor();
  LaplacianFactor(LaplacianFactor&&) noexcept;
  LaplacianFactor& operator=(LaplacianFactor&&) noexcept;

  /// Solves on the first n interior entries of rhs into out.
  void solve(std::span<const double> rhs, std::span<double> out) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct LinearReport {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Solves -Div D u = rhs on the interior with u = boundary on the halo by
/// Jacobi-preconditioned CG. Throws std::runtime_error if the iteration cap is hit.
ScalarField solve_linear_masked(const DomainPtr& domain, const ScalarField& rhs, const Clamp& boundary,
                                const SolveSettings& settings = {}, LinearReport* report = nullptr);

/// Smallest Rayleigh quotient delta^2 E(u)[v,v] / |Dv|^2 estimated by
/// `probes` Lanczos steps on the pencil (Hessian, -Div D).
double stability_check(const EnergyAssembly& assembly, const ScalarField& u, int probes = 40,
                       std::uint64_t seed = 7);

}  // namespace antiplane
