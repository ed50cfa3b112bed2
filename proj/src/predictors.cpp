#include "antiplane/predictors.hpp"

#include <cmath>
#include <stdexcept>

namespace antiplane {

namespace {

struct Polar {
  double r;
  double theta;
};

Polar polar(const Point& x) {
  if (x.x2 == 0.0 && x.x1 <= 0.0) throw std::domain_error("point lies on the crack line");
  return {std::hypot(x.x1, x.x2), std::atan2(x.x2, x.x1)};
}

Polar polar_nonzero(const Point& x, const char* who) {
  const Polar p = polar(x);
  if (p.r == 0.0) throw std::domain_error(std::string(who) + ": r = 0");
  return p;
}

}  // namespace

Omega omega(const Point& x) {
  const Polar p = polar(x);
  const double s = std::sqrt(p.r);
  return {s * std::cos(0.5 * p.theta), s * std::sin(0.5 * p.theta)};
}

void PredictorSpec::validate() const {
  if (!(k >= 0.0)) throw std::invalid_argument("PredictorSpec: K must be nonnegative");
  if (order < 0 || order > 2) throw std::invalid_argument("PredictorSpec: order must be 0, 1 or 2");
  if (order == 2 && !c2) throw std::invalid_argument("PredictorSpec: order 2 requires C2");
}

double u_hat0(const Point& x, const PredictorSpec& spec) { return spec.k * omega(x).w2; }

double u_hat1(const Point& x, const PredictorSpec& spec) {
  const Polar p = polar_nonzero(x, "u_hat1");
  return spec.u1_prefactor() / std::sqrt(p.r) *
         (std::log(p.r) * std::sin(0.5 * p.theta) + std::sin(2.5 * p.theta) / 6.0);
}

double u_hat2(const Point& x, const PredictorSpec& spec) {
  const Polar p = polar_nonzero(x, "u_hat2");
  return spec.c2.value_or(0.0) * std::sin(0.5 * p.theta) / std::sqrt(p.r);
}

double predictor_value(const Point& x, const PredictorSpec& spec) {
  double v = u_hat0(x, spec);
  if (spec.order >= 1) v += u_hat1(x, spec);
  if (spec.order >= 2) v += u_hat2(x, spec);
  return v;
}

ScalarField predictor_field(const DomainPtr& domain, const PredictorSpec& spec) {
  spec.validate();
  return ScalarField::from_function(domain, [&](const Site& m) { return predictor_value(position(m), spec); });
}

double sinclair_eval(const Point& x, const SinclairSeries& series) {
  const Polar p = polar_nonzero(x, "sinclair_eval");
  double v = 0.0;
  for (std::size_t j = 0; j < series.coefficients.size(); ++j) {
    const double e = 0.5 - static_cast<double>(j);
    v += series.coefficients[j] * std::pow(p.r, e) * std::sin(e * p.theta);
  }
  return v;
}

ScalarField sinclair_field(const DomainPtr& domain, const SinclairSeries& series) {
  return ScalarField::from_function(domain, [&](const Site& m) { return sinclair_eval(position(m), series); });
}

double du_hat0_dx1(const Point& x, double k) {
  const Polar p = polar_nonzero(x, "du_hat0_dx1");
  return -0.5 * k / std::sqrt(p.r) * std::sin(0.5 * p.theta);
}

double du_hat0_dx2(const Point& x, double k) {
  const Polar p = polar_nonzero(x, "du_hat0_dx2");
  return 0.5 * k / std::sqrt(p.r) * std::cos(0.5 * p.theta);
}

Point nonlinear_flux(const Point& x, const PredictorSpec& spec) {
  const double a = du_hat0_dx1(x, spec.k);
  const double b = du_hat0_dx2(x, spec.k);
  return {spec.phi4_at_0 / 6.0 * a * a * a, spec.phi4_at_0 / 6.0 * b * b * b};
}

Point nonlinear_flux_polar(double r, double theta, const PredictorSpec& spec) {
  const double c = spec.phi4_at_0 * spec.k * spec.k * spec.k / 192.0 * std::pow(r, -1.5);
  return {c * (3.0 * std::sin(0.5 * theta) + std::sin(2.5 * theta)),
          c * (3.0 * std::cos(0.5 * theta) + std::cos(2.5 * theta))};
}

}  // namespace antiplane
