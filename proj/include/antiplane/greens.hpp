#pragma once

// Lattice Green's functions of the cracked lattice and their predictors.

#include <memory>
#include <optional>
#include <vector>

#include "antiplane/analysis.hpp"
#include "antiplane/lattice.hpp"
#include "antiplane/predictors.hpp"
#include "antiplane/solver.hpp"

namespace antiplane {

/// G_hom(0) - G_hom(m) for the homogeneous square lattice, normalised so that
/// the four nearest-neighbour values sum to 1. Throws std::runtime_error if
/// the quadrature error estimate exceeds 1e-12.
double g_hom_diff(int m1, int m2);

/// Continuum predictor F(-w(m) + w(s)) + F(-w(m) + w*(s)), F = -log|.|/(4 pi).
/// Throws std::domain_error if m == s.
double g_hat0(const Site& m, const Site& s);

/// Source factor of the discrete geometry predictor, -2 w2(s) / |s|.
double g_hat1_s(const Point& s);
inline double g_hat1_s(const Site& s) { return g_hat1_s(position(s)); }

/// Prefactor of F; the assembled predictor is kGreenScale G1m(m) G1s(s) so that
/// it cancels the first-order Taylor term of G0hat.
inline constexpr double kGreenScale = -0.07957747154594767;  // -1/(4 pi)

/// Radial cutoff: 1 on [0, 1/2], 0 on [1, inf), quintic smoothstep between.
class CutoffProfile {
 public:
  static CutoffProfile quintic() { return CutoffProfile(false); }
  /// Identically zero; switches the discrete geometry correction off.
  static CutoffProfile zero() { return CutoffProfile(true); }

  double operator()(double t) const;
  bool is_zero() const { return zero_; }

 private:
  explicit CutoffProfile(bool zero) : zero_(zero) {}
  bool zero_;
};

/// profile(|x(m)| / |x(s)|^{1/2}).
double mu_cutoff(const Site& m, const Site& s, const CutoffProfile& profile);

/// Green's column G(., s) and its decomposition G = G0hat + mu G1hat + remainder.
/// G0hat and the remainder are NaN at the source.
struct GreensColumn {
  Site source;
  ScalarField full;
  ScalarField hat0;
  ScalarField hat1_mu;
  ScalarField remainder;
  /// l-infinity norm of -Div D G - delta_s on the interior.
  double residual_linf = 0.0;
};

/// Discrete geometry corrector: -Div D G1m = Div D w2 with a zero clamp,
/// solved by Jacobi CG.
ScalarField g_hat1_m(const DomainPtr& domain, const SolveSettings& settings = {});

/// Dirichlet data of Green's columns outside the domain.
enum class GreenBoundary {
  kHat0,      // G0hat(m, s)
  kSymmetric  // G0hat(m, s) + G1s(m) G1m(s) scaled like F
};

/// Direct solver for Green's columns on one domain; the sparse factorisation of
/// the clamped Laplacian is computed once and shared by all columns.
class CrackGreenSolver {
 public:
  explicit CrackGreenSolver(DomainPtr domain, GreenBoundary boundary = GreenBoundary::kSymmetric);

  const DomainPtr& domain_ptr() const { return domain_; }

  GreenBoundary boundary() const { return boundary_; }

  /// Solves -Div D G = delta_s with the far-field data on the halo.
  /// Requires s interior with |s| <= R/2.
  GreensColumn column(const Site& s, const CutoffProfile& profile = CutoffProfile::quintic()) const;

  /// Same as the free g_hat1_m, by direct solve. Cached after the first call.
  const ScalarField& g_hat1_m() const;

 private:
  DomainPtr domain_;
  LaplacianFactor factor_;
  GreenBoundary boundary_;
  mutable std::optional<ScalarField> g1m_;
};

GreensColumn solve_crack_green(const Site& s, const DomainPtr& domain,
                               const CutoffProfile& profile = CutoffProfile::quintic(),
                               GreenBoundary boundary = GreenBoundary::kSymmetric);

/// max |G(m, s) - G(s, m)| over all ordered pairs of distinct sites in `sites`.
double green_symmetry_defect(const CrackGreenSolver& solver, const std::vector<Site>& sites);

/// Remainder statistic max_{|l| <= |s|/16} |D_l (Gbar(l, s + e2) - Gbar(l, s))| |l|^{1/2}.
struct Gbar1Sample {
  Site source;
  double source_radius = 0.0;
  double statistic = 0.0;
  int sites = 0;
};

/// Requires |s|/16 >= 8 and both s and s + e2 interior with radius <= R/2.
Gbar1Sample gbar1_statistic(const CrackGreenSolver& solver, const Site& s, const CutoffProfile& profile);

/// Sources on the ray x1 = 1/2 with |x2| close to each requested radius.
std::vector<Site> ray_sources(const std::vector<int>& radii);

/// One shell per source (r_mid = |s|, max = statistic) and the log-log slope
/// of the statistic against |s| over all sources.
DecayReport gbar1_diagnostic(const std::vector<Site>& sources, const CrackGreenSolver& solver,
                             const CutoffProfile& profile);

}  // namespace antiplane
