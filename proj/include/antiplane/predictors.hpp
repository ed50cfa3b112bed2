#pragma once

#include <optional>
#include <vector>

#include "antiplane/lattice.hpp"

namespace antiplane {

struct Point {
  double x1 = 0.0;
  double x2 = 0.0;
};

inline Point position(const Site& m) { return {m.x1(), m.x2()}; }

/// Complex square root sqrt(r) (cos(theta/2), sin(theta/2)), theta in (-pi, pi].
/// The branch cut is the crack line {x2 = 0, x1 <= 0}; throws std::domain_error there.
struct Omega {
  double w1 = 0.0;
  double w2 = 0.0;
};
Omega omega(const Point& x);

struct PredictorSpec {
  double k = 0.4;
  /// Amplitude of the r^{-1/2} sin(theta/2) predictor; required for order 2.
  std::optional<double> c2;
  /// phi''''(0) of the pair potential feeding the nonlinear log predictor.
  double phi4_at_0 = -18.0;
  int order = 0;

  /// -(K^3 / 64) phi''''(0).
  double u1_prefactor() const { return -k * k * k / 64.0 * phi4_at_0; }
  void validate() const;
};

double u_hat0(const Point& x, const PredictorSpec& spec);
inline double u_hat0(const Site& m, const PredictorSpec& spec) { return u_hat0(position(m), spec); }

/// Nonlinear correction -(K^3/64) phi''''(0) r^{-1/2} (log r sin(theta/2) + sin(5 theta/2) / 6).
double u_hat1(const Point& x, const PredictorSpec& spec);

/// C2 r^{-1/2} sin(theta/2).
double u_hat2(const Point& x, const PredictorSpec& spec);

/// Sum of predictors up to spec.order.
double predictor_value(const Point& x, const PredictorSpec& spec);

/// Predictor of the given order on every stored site of the domain.
ScalarField predictor_field(const DomainPtr& domain, const PredictorSpec& spec);

/// Truncated continuum series sum_j c_j r^{1/2 - j} sin((1 - 2j) theta / 2).
struct SinclairSeries {
  std::vector<double> coefficients;
};

double sinclair_eval(const Point& x, const SinclairSeries& series);
ScalarField sinclair_field(const DomainPtr& domain, const SinclairSeries& series);

// Closed-form continuum derivatives of u_hat0, used by verification code.
double du_hat0_dx1(const Point& x, double k);
double du_hat0_dx2(const Point& x, double k);

/// Flux H = phi''''(0)/6 ((d1 u0)^3, (d2 u0)^3) whose divergence drives u_hat1.
Point nonlinear_flux(const Point& x, const PredictorSpec& spec);

/// Polar components (G_r, G_theta) of the flux at (r, theta).
Point nonlinear_flux_polar(double r, double theta, const PredictorSpec& spec);

}  // namespace antiplane
