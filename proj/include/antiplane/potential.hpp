#pragma once

#include <span>
#include <string>
#include <vector>

#include "antiplane/lattice.hpp"

namespace antiplane {

/// Even nearest-neighbour pair potential phi with analytic derivatives.
class PairPotential {
 public:
  enum class Kind { kGaussian, kQuadratic };

  /// phi(r) = (1 - exp(-3 r^2)) / 6, so phi''(0) = 1 and phi''''(0) = -18.
  static PairPotential gaussian() { return PairPotential(Kind::kGaussian); }
  /// phi(r) = r^2 / 2.
  static PairPotential quadratic() { return PairPotential(Kind::kQuadratic); }
  /// "gaussian" or "quadratic".
  static PairPotential from_name(const std::string& name);

  Kind kind() const { return kind_; }
  std::string name() const;
  bool is_even() const { return true; }

  double value(double r) const;
  /// d^order phi / dr^order for order in 0..4.
  double derivative(double r, int order) const;
  double d1(double r) const;
  double d2(double r) const;
  /// phi(to) - phi(from) without cancellation when to is close to from.
  double delta(double from, double to) const;

 private:
  explicit PairPotential(Kind k) : kind_(k) {}
  Kind kind_;
};

/// phi^(order)(r) for the default gaussian potential.
double phi_derivatives(double r, int order);

/// Generalised energy difference E(u_pred, u) on a truncated domain.
///
/// Free variables are the interior values of u; the halo of u is always zero.
/// The sum runs over directed bonds (m, rho in R(m)) touching the interior,
/// so each physical bond contributes once per orientation.
class EnergyAssembly {
 public:
  EnergyAssembly(PairPotential potential, ScalarField predictor, ScalarField reference);

  const LatticeDomain& domain() const { return predictor_.domain(); }
  const DomainPtr& domain_ptr() const { return predictor_.domain_ptr(); }
  const PairPotential& potential() const { return potential_; }
  const ScalarField& predictor() const { return predictor_; }
  const ScalarField& reference() const { return reference_; }

  /// u_pred + u with the halo of u taken as zero.
  ScalarField total(const ScalarField& u) const;

  double energy(const ScalarField& u) const;
  /// First variation on interior sites, zero on the halo.
  ScalarField gradient(const ScalarField& u) const;
  /// delta^2 E(u)[v, .] on interior sites.
  ScalarField hessian_apply(const ScalarField& u, const ScalarField& v) const;

  // Span-level kernels used by the minimiser; `u` covers every stored site.
  double energy(std::span<const double> u) const;
  void gradient(std::span<const double> u, std::span<double> out) const;
  /// E(u + t d) - E(u), assembled bondwise from stable differences.
  double energy_change(std::span<const double> u, std::span<const double> d, double t) const;
  /// d/dt E(u + t d).
  double directional_derivative(std::span<const double> u, std::span<const double> d, double t) const;

 private:
  void check(const ScalarField& u) const;

  PairPotential potential_;
  ScalarField predictor_;
  ScalarField reference_;
  std::vector<double> pred_bonds_;
  std::vector<double> ref_bonds_;
};

/// |Div grad V(D u_total)| on interior sites.
ScalarField forces(const PairPotential& potential, const ScalarField& u_total);

/// |Div D u| on interior sites.
ScalarField linear_residual(const ScalarField& u);

}  // namespace antiplane
