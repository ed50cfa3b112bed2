#include "antiplane/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace antiplane {

PairPotential PairPotential::from_name(const std::string& name) {
  if (name == "gaussian" || name == "default") return gaussian();
  if (name == "quadratic") return quadratic();
  throw std::invalid_argument("unknown potential '" + name + "' (expected gaussian or quadratic)");
}

std::string PairPotential::name() const { return kind_ == Kind::kGaussian ? "gaussian" : "quadratic"; }

double PairPotential::value(double r) const { return derivative(r, 0); }

double PairPotential::derivative(double r, int order) const {
  if (order < 0 || order > 4) {
    throw std::invalid_argument("PairPotential::derivative: unsupported order " + std::to_string(order));
  }
  if (kind_ == Kind::kQuadratic) {
    switch (order) {
      case 0: return 0.5 * r * r;
      case 1: return r;
      case 2: return 1.0;
      default: return 0.0;
    }
  }
  const double r2 = r * r;
  const double e = std::exp(-3.0 * r2);
  switch (order) {
    case 0: return -std::expm1(-3.0 * r2) / 6.0;
    case 1: return r * e;
    case 2: return (1.0 - 6.0 * r2) * e;
    case 3: return (36.0 * r2 - 18.0) * r * e;
    default: return (-216.0 * r2 * r2 + 216.0 * r2 - 18.0) * e;
  }
}

double PairPotential::d1(double r) const {
  return kind_ == Kind::kQuadratic ? r : r * std::exp(-3.0 * r * r);
}

double PairPotential::d2(double r) const {
  if (kind_ == Kind::kQuadratic) return 1.0;
  const double r2 = r * r;
  return (1.0 - 6.0 * r2) * std::exp(-3.0 * r2);
}

double PairPotential::delta(double from, double to) const {
  // to^2 - from^2 factored to keep relative accuracy for to ~ from.
  const double sq = (to - from) * (to + from);
  if (kind_ == Kind::kQuadratic) return 0.5 * sq;
  return -std::exp(-3.0 * from * from) * std::expm1(-3.0 * sq) / 6.0;
}

double phi_derivatives(double r, int order) { return PairPotential::gaussian().derivative(r, order); }

EnergyAssembly::EnergyAssembly(PairPotential potential, ScalarField predictor, ScalarField reference)
    : potential_(potential), predictor_(std::move(predictor)), reference_(std::move(reference)) {
  if (&predictor_.domain() != &reference_.domain()) {
    throw std::invalid_argument("EnergyAssembly: predictor and reference live on different domains");
  }
  const auto bonds = domain().bonds();
  pred_bonds_.resize(bonds.size());
  ref_bonds_.resize(bonds.size());
  for (std::size_t i = 0; i < bonds.size(); ++i) {
    pred_bonds_[i] = predictor_[bonds[i].to] - predictor_[bonds[i].from];
    ref_bonds_[i] = reference_[bonds[i].to] - reference_[bonds[i].from];
  }
}

void EnergyAssembly::check(const ScalarField& u) const {
  if (&u.domain() != &domain()) throw std::invalid_argument("EnergyAssembly: field domain mismatch");
}

ScalarField EnergyAssembly::total(const ScalarField& u) const {
  check(u);
  ScalarField t = predictor_;
  for (std::size_t i = 0; i < domain().num_interior(); ++i) t[i] += u[i];
  return t;
}

double EnergyAssembly::energy(std::span<const double> u) const {
  const auto bonds = domain().bonds();
  const auto& d = domain();
  double e = 0.0;
  for (std::size_t i = 0; i < bonds.size(); ++i) {
    const Bond& b = bonds[i];
    const double uto = d.is_interior(b.to) ? u[b.to] : 0.0;
    const double ufrom = d.is_interior(b.from) ? u[b.from] : 0.0;
    e += potential_.delta(ref_bonds_[i], pred_bonds_[i] + uto - ufrom);
  }
  return e;
}

double EnergyAssembly::energy(const ScalarField& u) const {
  check(u);
  return energy(u.values());
}

void EnergyAssembly::gradient(std::span<const double> u, std::span<double> out) const {
  const auto bonds = domain().bonds();
  const auto& d = domain();
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < bonds.size(); ++i) {
    const Bond& b = bonds[i];
    const bool to_in = d.is_interior(b.to);
    const bool from_in = d.is_interior(b.from);
    const double du = (to_in ? u[b.to] : 0.0) - (from_in ? u[b.from] : 0.0);
    const double f = potential_.d1(pred_bonds_[i] + du);
    if (to_in) out[b.to] += f;
    if (from_in) out[b.from] -= f;
  }
}

ScalarField EnergyAssembly::gradient(const ScalarField& u) const {
  check(u);
  ScalarField g(domain_ptr());
  gradient(u.values(), g.values());
  return g;
}

double EnergyAssembly::energy_change(std::span<const double> u, std::span<const double> dir, double t) const {
  const auto bonds = domain().bonds();
  const auto& d = domain();
  double e = 0.0;
  for (std::size_t i = 0; i < bonds.size(); ++i) {
    const Bond& b = bonds[i];
    const bool to_in = d.is_interior(b.to);
    const bool from_in = d.is_interior(b.from);
    const double base = pred_bonds_[i] + (to_in ? u[b.to] : 0.0) - (from_in ? u[b.from] : 0.0);
    const double step = (to_in ? dir[b.to] : 0.0) - (from_in ? dir[b.from] : 0.0);
    if (step != 0.0) e += potential_.delta(base, base + t * step);
  }
  return e;
}

double EnergyAssembly::directional_derivative(std::span<const double> u, std::span<const double> dir,
                                              double t) const {
  const auto bonds = domain().bonds();
  const auto& d = domain();
  double s = 0.0;
  for (std::size_t i = 0; i < bonds.size(); ++i) {
    const Bond& b = bonds[i];
    const bool to_in = d.is_interior(b.to);
    const bool from_in = d.is_interior(b.from);
    const double step = (to_in ? dir[b.to] : 0.0) - (from_in ? dir[b.from] : 0.0);
    if (step == 0.0) continue;
    const double base = pred_bonds_[i] + (to_in ? u[b.to] : 0.0) - (from_in ? u[b.from] : 0.0);
    s += potential_.d1(base + t * step) * step;
  }
  return s;
}

ScalarField EnergyAssembly::hessian_apply(const ScalarField& u, const ScalarField& v) const {
  check(u);
  check(v);
  const auto bonds = domain().bonds();
  const auto& d = domain();
  ScalarField out(domain_ptr());
  for (std::size_t i = 0; i < bonds.size(); ++i) {
    const Bond& b = bonds[i];
    const bool to_in = d.is_interior(b.to);
    const bool from_in = d.is_interior(b.from);
    const double du = (to_in ? u[b.to] : 0.0) - (from_in ? u[b.from] : 0.0);
    const double dv = (to_in ? v[b.to] : 0.0) - (from_in ? v[b.from] : 0.0);
    const double f = potential_.d2(pred_bonds_[i] + du) * dv;
    if (to_in) out[b.to] += f;
    if (from_in) out[b.from] -= f;
  }
  return out;
}

ScalarField forces(const PairPotential& potential, const ScalarField& u_total) {
  const auto& d = u_total.domain();
  ScalarField out(u_total.domain_ptr());
  for (const Bond& b : d.bonds()) {
    const double f = potential.d1(u_total[b.to] - u_total[b.from]);
    if (d.is_interior(b.to)) out[b.to] += f;
    if (d.is_interior(b.from)) out[b.from] -= f;
  }
  for (double& v : out.values()) v = std::abs(v);
  return out;
}

ScalarField linear_residual(const ScalarField& u) {
  ScalarField out = neg_laplacian(u);
  for (double& v : out.values()) v = std::abs(v);
  return out;
}

}  // namespace antiplane
