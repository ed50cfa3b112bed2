#include "antiplane/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace antiplane {

double Site::radius() const { return std::hypot(x1(), x2()); }

std::vector<Direction> stencil(const Site& m) {
  std::vector<Direction> out;
  for (int k = 0; k < kNumDirections; ++k) {
    if (bond_active(m, k)) out.push_back(static_cast<Direction>(k));
  }
  return out;
}

namespace {

// Exact membership test |x(m)|^2 <= R^2 with x = (a - 1/2, b - 1/2):
// 4|x|^2 = (2a - 1)^2 + (2b - 1)^2 is an integer.
bool inside_ball(const Site& m, double radius) {
  const long long p = 2LL * m.a - 1;
  const long long q = 2LL * m.b - 1;
  return static_cast<double>(p * p + q * q) <= 4.0 * radius * radius;
}

}  // namespace

std::vector<Site> sites_in_ball(double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("sites_in_ball: radius must be positive");
  const int n = static_cast<int>(std::ceil(radius)) + 1;
  std::vector<Site> out;
  for (int a = -n + 1; a <= n; ++a) {
    for (int b = -n + 1; b <= n; ++b) {
      if (inside_ball({a, b}, radius)) out.push_back({a, b});
    }
  }
  return out;
}

std::shared_ptr<const LatticeDomain> LatticeDomain::create(double radius) {
  auto interior = sites_in_ball(radius);
  std::shared_ptr<LatticeDomain> d(new LatticeDomain());
  d->radius_ = radius;
  d->num_interior_ = interior.size();

  const int n = static_cast<int>(std::ceil(radius)) + 2;
  d->a_min_ = -n;
  d->b_min_ = -n;
  d->width_ = 2 * n + 2;
  d->height_ = 2 * n + 2;
  d->grid_.assign(static_cast<std::size_t>(d->width_) * d->height_, -1);

  auto cell = [&](const Site& m) -> int& {
    return d->grid_[static_cast<std::size_t>(m.a - d->a_min_) * d->height_ + (m.b - d->b_min_)];
  };

  std::vector<Site> halo;
  for (std::size_t i = 0; i < interior.size(); ++i) cell(interior[i]) = static_cast<int>(i);
  for (const auto& m : interior) {
    for (int k = 0; k < kNumDirections; ++k) {
      const Site nb = shift(m, k);
      if (cell(nb) == -1) {
        cell(nb) = -2;
        halo.push_back(nb);
      }
    }
  }
  std::sort(halo.begin(), halo.end());

  d->sites_ = std::move(interior);
  d->sites_.insert(d->sites_.end(), halo.begin(), halo.end());
  for (std::size_t i = d->num_interior_; i < d->sites_.size(); ++i) {
    cell(d->sites_[i]) = static_cast<int>(i);
  }

  d->neighbors_.resize(d->sites_.size());
  for (std::size_t i = 0; i < d->sites_.size(); ++i) {
    for (int k = 0; k < kNumDirections; ++k) {
      d->neighbors_[i][k] = d->index_of(shift(d->sites_[i], k));
    }
  }

  for (std::size_t i = 0; i < d->sites_.size(); ++i) {
    const Site& m = d->sites_[i];
    for (int k = 0; k < kNumDirections; ++k) {
      const int j = d->neighbors_[i][k];
      if (j < 0 || !bond_active(m, k)) continue;
      if (!d->is_interior(static_cast<int>(i)) && !d->is_interior(j)) continue;
      d->bonds_.push_back({static_cast<int>(i), j, k});
    }
  }
  return d;
}

int LatticeDomain::index_of(const Site& m) const {
  const int ia = m.a - a_min_;
  const int ib = m.b - b_min_;
  if (ia < 0 || ib < 0 || ia >= width_ || ib >= height_) return -1;
  const int v = grid_[static_cast<std::size_t>(ia) * height_ + ib];
  return v >= 0 ? v : -1;
}

ScalarField::ScalarField(DomainPtr domain) : domain_(std::move(domain)) {
  if (!domain_) throw std::invalid_argument("ScalarField: null domain");
  values_.assign(domain_->size(), 0.0);
}

ScalarField::ScalarField(DomainPtr domain, std::vector<double> values)
    : domain_(std::move(domain)), values_(std::move(values)) {
  if (!domain_) throw std::invalid_argument("ScalarField: null domain");
  if (values_.size() != domain_->size()) {
    throw std::invalid_argument("ScalarField: expected " + std::to_string(domain_->size()) +
                                " values, got " + std::to_string(values_.size()));
  }
}

ScalarField ScalarField::from_function(DomainPtr domain, const std::function<double(const Site&)>& fn,
                                       const Clamp& clamp) {
  ScalarField f(std::move(domain));
  const auto& d = f.domain();
  for (std::size_t i = 0; i < d.num_interior(); ++i) f.values_[i] = fn(d.site(static_cast<int>(i)));
  f.apply_clamp(clamp);
  return f;
}

ScalarField ScalarField::from_function(DomainPtr domain, const std::function<double(const Site&)>& fn) {
  ScalarField f(std::move(domain));
  const auto& d = f.domain();
  for (std::size_t i = 0; i < d.size(); ++i) f.values_[i] = fn(d.site(static_cast<int>(i)));
  return f;
}

double ScalarField::at(const Site& m) const {
  const int i = domain_->index_of(m);
  if (i < 0) {
    throw std::out_of_range("ScalarField::at: site (" + std::to_string(m.a) + ", " + std::to_string(m.b) +
                            ") not in domain");
  }
  return values_[i];
}

void ScalarField::apply_clamp(const Clamp& clamp) {
  for (std::size_t i = domain_->num_interior(); i < domain_->size(); ++i) {
    values_[i] = clamp(domain_->site(static_cast<int>(i)));
  }
}

namespace {
void require_same_domain(const ScalarField& a, const ScalarField& b) {
  if (&a.domain() != &b.domain()) throw std::invalid_argument("field domain mismatch");
}
}  // namespace

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_domain(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_domain(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField operator+(ScalarField lhs, const ScalarField& rhs) { return lhs += rhs; }
ScalarField operator-(ScalarField lhs, const ScalarField& rhs) { return lhs -= rhs; }
ScalarField operator*(double s, ScalarField f) { return f *= s; }

BondField::BondField(DomainPtr domain) : domain_(std::move(domain)) {
  if (!domain_) throw std::invalid_argument("BondField: null domain");
  values_.assign(domain_->size(), {0.0, 0.0, 0.0, 0.0});
}

ScalarField BondField::magnitude() const {
  ScalarField out(domain_);
  for (std::size_t i = 0; i < domain_->num_interior(); ++i) {
    double s = 0.0;
    for (double v : values_[i]) s += v * v;
    out[i] = std::sqrt(s);
  }
  return out;
}

std::array<double, kNumDirections> grad(const ScalarField& u, int index) {
  const auto& d = u.domain();
  const Site& m = d.site(index);
  std::array<double, kNumDirections> g{0.0, 0.0, 0.0, 0.0};
  for (int k = 0; k < kNumDirections; ++k) {
    const int j = d.neighbor(index, k);
    if (j < 0 || !bond_active(m, k)) continue;
    g[k] = u[j] - u[index];
  }
  return g;
}

BondField grad(const ScalarField& u) {
  BondField g(u.domain_ptr());
  for (const Bond& b : u.domain().bonds()) g[b.from][b.dir] = u[b.to] - u[b.from];
  return g;
}

ScalarField neg_divergence(const BondField& g) {
  const auto& d = g.domain();
  ScalarField out(g.domain_ptr());
  for (const Bond& b : d.bonds()) {
    const double v = g[b.from][b.dir];
    if (d.is_interior(b.to)) out[b.to] += v;
    if (d.is_interior(b.from)) out[b.from] -= v;
  }
  return out;
}

ScalarField neg_laplacian(const ScalarField& u) {
  const auto& d = u.domain();
  ScalarField out(u.domain_ptr());
  for (const Bond& b : d.bonds()) {
    const double v = u[b.to] - u[b.from];
    if (d.is_interior(b.to)) out[b.to] += v;
    if (d.is_interior(b.from)) out[b.from] -= v;
  }
  return out;
}

double dirichlet_product(const ScalarField& u, const ScalarField& v) {
  require_same_domain(u, v);
  double s = 0.0;
  for (const Bond& b : u.domain().bonds()) s += (u[b.to] - u[b.from]) * (v[b.to] - v[b.from]);
  return s;
}

}  // namespace antiplane
