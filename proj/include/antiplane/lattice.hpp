#pragma once

// Cracked square lattice: sites, stencils, truncated domains and the masked
// discrete gradient / divergence pair.

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace antiplane {

/// Lattice site with integer label (a, b); its position is (a - 1/2, b - 1/2).
struct Site {
  int a = 0;
  int b = 0;

  double x1() const { return a - 0.5; }
  double x2() const { return b - 0.5; }
  double radius() const;

  friend bool operator==(const Site&, const Site&) = default;
  friend auto operator<=>(const Site&, const Site&) = default;
};

/// Nearest-neighbour directions in the fixed order e1, e2, -e1, -e2.
enum class Direction : int { kE1 = 0, kE2 = 1, kMinusE1 = 2, kMinusE2 = 3 };

inline constexpr int kNumDirections = 4;
inline constexpr std::array<std::array<int, 2>, kNumDirections> kOffsets{
    {{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};

constexpr int opposite(int k) { return (k + 2) % kNumDirections; }

inline Site shift(const Site& m, int k) {
  return {m.a + kOffsets[k][0], m.b + kOffsets[k][1]};
}

/// Upper crack face: x1 < 0, x2 = 1/2.
constexpr bool on_upper_face(const Site& m) { return m.a <= 0 && m.b == 1; }
/// Lower crack face: x1 < 0, x2 = -1/2.
constexpr bool on_lower_face(const Site& m) { return m.a <= 0 && m.b == 0; }

/// Whether direction k belongs to the interaction stencil of m.
constexpr bool bond_active(const Site& m, int k) {
  if (k == static_cast<int>(Direction::kMinusE2) && on_upper_face(m)) return false;
  if (k == static_cast<int>(Direction::kE2) && on_lower_face(m)) return false;
  return true;
}

/// Active directions of m, in canonical order.
std::vector<Direction> stencil(const Site& m);

/// Reflection x2 -> -x2, i.e. (a, b) -> (a, 1 - b).
constexpr Site mirror(const Site& m) { return {m.a, 1 - m.b}; }

/// All sites with |x(m)| <= R, ordered lexicographically in (a, b).
std::vector<Site> sites_in_ball(double radius);

/// Directed bond (from, to) between stored sites of a domain.
struct Bond {
  int from = 0;
  int to = 0;
  int dir = 0;
};

/// Lambda_R = B_R ∩ Lambda together with the one-ring halo of clamped sites.
///
/// Site indices [0, num_interior()) are the free (interior) sites in
/// lexicographic order; the halo follows, also lexicographic. The domain is
/// immutable once built and is shared between fields through shared_ptr.
class LatticeDomain {
 public:
  static std::shared_ptr<const LatticeDomain> create(double radius);

  double radius() const { return radius_; }
  std::size_t size() const { return sites_.size(); }
  std::size_t num_interior() const { return num_interior_; }
  std::size_t num_halo() const { return sites_.size() - num_interior_; }
  bool is_interior(int index) const { return index >= 0 && static_cast<std::size_t>(index) < num_interior_; }

  const Site& site(int index) const { return sites_[index]; }
  std::span<const Site> sites() const { return sites_; }
  std::span<const Site> interior_sites() const { return {sites_.data(), num_interior_}; }

  /// Index of m, or -1 if m is neither interior nor halo.
  int index_of(const Site& m) const;
  bool contains(const Site& m) const { return index_of(m) >= 0; }

  /// Neighbour index in direction k, -1 when not stored.
  int neighbor(int index, int k) const { return neighbors_[index][k]; }

  /// Directed bonds (m, rho) with rho in R(m) and at least one interior
  /// endpoint. Every physical bond touching the interior appears twice.
  std::span<const Bond> bonds() const { return bonds_; }

 private:
  LatticeDomain() = default;

  double radius_ = 0.0;
  std::size_t num_interior_ = 0;
  std::vector<Site> sites_;
  std::vector<std::array<int, kNumDirections>> neighbors_;
  std::vector<Bond> bonds_;
  int a_min_ = 0, b_min_ = 0, width_ = 0, height_ = 0;
  std::vector<int> grid_;
};

using DomainPtr = std::shared_ptr<const LatticeDomain>;

/// Value policy for halo (exterior) sites.
class Clamp {
 public:
  static Clamp zero() { return Clamp({}); }
  static Clamp values(std::function<double(const Site&)> fn) { return Clamp(std::move(fn)); }

  double operator()(const Site& m) const { return fn_ ? fn_(m) : 0.0; }
  bool is_zero() const { return !fn_; }

 private:
  explicit Clamp(std::function<double(const Site&)> fn) : fn_(std::move(fn)) {}
  std::function<double(const Site&)> fn_;
};

/// Scalar lattice function on the interior and halo of a domain.
class ScalarField {
 public:
  explicit ScalarField(DomainPtr domain);
  ScalarField(DomainPtr domain, std::vector<double> values);

  /// Evaluates fn on the interior and clamp on the halo.
  static ScalarField from_function(DomainPtr domain, const std::function<double(const Site&)>& fn,
                                   const Clamp& clamp);
  /// Evaluates fn on every stored site, interior and halo alike.
  static ScalarField from_function(DomainPtr domain, const std::function<double(const Site&)>& fn);

  const LatticeDomain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  /// Value at a stored site; throws std::out_of_range otherwise.
  double at(const Site& m) const;

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  std::span<const double> interior() const { return {values_.data(), domain_->num_interior()}; }
  std::span<double> interior() { return {values_.data(), domain_->num_interior()}; }

  void apply_clamp(const Clamp& clamp);

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s);

 private:
  DomainPtr domain_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField lhs, const ScalarField& rhs);
ScalarField operator-(ScalarField lhs, const ScalarField& rhs);
ScalarField operator*(double s, ScalarField f);

/// Four bond values per stored site, indexed by direction; inactive entries are 0.
/// On halo sites only bonds pointing into the interior are populated.
class BondField {
 public:
  explicit BondField(DomainPtr domain);

  const LatticeDomain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }

  const std::array<double, kNumDirections>& operator[](std::size_t i) const { return values_[i]; }
  std::array<double, kNumDirections>& operator[](std::size_t i) { return values_[i]; }

  /// Euclidean norm of the 4-vector at every site (halo set to 0).
  ScalarField magnitude() const;

 private:
  DomainPtr domain_;
  std::vector<std::array<double, kNumDirections>> values_;
};

/// Masked gradient Du(m) at stored site `index`.
std::array<double, kNumDirections> grad(const ScalarField& u, int index);
/// Masked gradient over the whole domain.
BondField grad(const ScalarField& u);

/// (-Div g)(m) = sum_rho g_rho(m - rho) - g_rho(m) on interior sites; halo is 0.
ScalarField neg_divergence(const BondField& g);

/// -Div D u on interior sites, computed directly from the bond list.
ScalarField neg_laplacian(const ScalarField& u);

/// sum_m Du(m) . Dv(m) over every directed bond touching the interior.
double dirichlet_product(const ScalarField& u, const ScalarField& v);

}  // namespace antiplane
