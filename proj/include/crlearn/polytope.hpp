#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "crlearn/constraints.hpp"
#include "crlearn/lp.hpp"
#include "crlearn/rng.hpp"

namespace crlearn {

using Vec = Eigen::VectorXd;

inline constexpr double kInteriorSlack = 1e-12;
inline constexpr double kDegenerateRadius = 1e-12;
inline constexpr double kChordCollapse = 1e-14;

/// Intersection of halfspaces a_i' x <= b_i.
class Polyhedron {
 public:
  Polyhedron(RowMatrix A, Vec b);

  /// Stored pairs, x >= 0 and the prior box x <= prior_g_ub.
  static Polyhedron from_constraints(const ConstraintSet& set, int dim);
  /// Only the box [lo, hi].
  static Polyhedron box(const Vec& lo, const Vec& hi);

  int dim() const noexcept { return static_cast<int>(A_.cols()); }
  int size() const noexcept { return static_cast<int>(A_.rows()); }
  const RowMatrix& A() const noexcept { return A_; }
  const Vec& b() const noexcept { return b_; }

  Vec slacks(const Vec& x) const { return b_ - A_ * x; }
  /// All slacks >= -tol.
  bool contains(const Vec& x, double tol = 0.0) const;
  /// All slacks > tol.
  bool strictly_contains(const Vec& x, double tol = kInteriorSlack) const;

  /// Drops halfspaces that no point of the box can violate. The result
  /// describes the same set whenever the polyhedron lies inside the box.
  Polyhedron without_redundant(const struct BoundingBox& enclosing) const;

 private:
  RowMatrix A_;
  Vec b_;
};

struct BoundingBox {
  Vec lo;
  Vec hi;
};

enum class Sense { Minimize, Maximize };

struct LpResult {
  double optimum = 0.0;
  Vec point;
};

/// Throws Error(EmptyPolyhedron).
LpResult lp_solve(const Vec& objective, Sense sense, const Polyhedron& P);

/// 2N coordinate LPs.
BoundingBox bounding_box(const Polyhedron& P);

struct ChebyshevBall {
  Vec center;
  double radius = 0.0;
};

/// Largest inscribed ball. Throws Error(EmptyPolyhedron) or
/// Error(DegeneratePolyhedron) when the radius is <= kDegenerateRadius.
ChebyshevBall chebyshev_center(const Polyhedron& P);

/// Hit-and-Run: isotropic direction, exact chord, uniform point on the chord.
/// Throws Error(ChordCollapse) when a chord is shorter than kChordCollapse.
std::vector<Vec> hit_and_run(const Polyhedron& P, int n_samples, int burn_in, const Vec& start,
                             Rng& rng);

struct SamplerSettings {
  int samples = 2000;
  int burn_in = 100;
};

/// Mean of Hit-and-Run samples. The walk starts at the analytic center and
/// draws directions from its Dikin ellipsoid.
Vec center_of_gravity(const Polyhedron& P, const SamplerSettings& settings, Rng& rng);

struct CgEstimate {
  Vec center;
  std::vector<Vec> seeds;  // evenly spaced samples, handy as the next start
};

/// Same estimator, but the walk starts from the deepest point among the
/// Chebyshev center and `seeds`. Thin sets whose LP center is off by rounding
/// still get a strictly interior start this way. Returns up to `keep` samples.
/// Throws Error(DegeneratePolyhedron) when no candidate is strictly interior.
CgEstimate center_of_gravity_seeded(const Polyhedron& P, const SamplerSettings& settings, Rng& rng,
                                    const std::vector<Vec>& seeds, int keep = 32);

struct NewtonSettings {
  double tol = 1e-10;  // on decrement^2 / 2
  int max_iter = 200;
  double alpha = 0.25;
  double beta = 0.5;
};

struct AnalyticCenterResult {
  Vec center;
  int iterations = 0;
  bool converged = false;
  double decrement_sq = 0.0;
};

/// Minimizer of -sum log(b_i - a_i'x) by damped Newton with backtracking.
/// Starts from warm_start when it is strictly interior, else from the
/// Chebyshev center. Hitting max_iter returns the last iterate with
/// converged = false.
AnalyticCenterResult analytic_center(const Polyhedron& P, const std::optional<Vec>& warm_start,
                                     const NewtonSettings& settings = {});

double barrier_value(const Polyhedron& P, const Vec& x);
Vec barrier_gradient(const Polyhedron& P, const Vec& x);

/// Largest distance from center to a box vertex, in O(N).
double d_max(const Vec& center, const BoundingBox& box);

}  // namespace crlearn
