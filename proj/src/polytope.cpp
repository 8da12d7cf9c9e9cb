#include "crlearn/polytope.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "crlearn/error.hpp"

namespace crlearn {

Polyhedron::Polyhedron(RowMatrix A, Vec b) : A_(std::move(A)), b_(std::move(b)) {
  if (A_.rows() != b_.size()) throw std::invalid_argument("halfspace count mismatch");
}

Polyhedron Polyhedron::from_constraints(const ConstraintSet& set, int dim) {
  Eigen::Index rows = 2 * dim;
  for (const auto& pair : set.pairs) rows += (pair.upper ? 1 : 0) + (pair.lower ? 1 : 0);
  RowMatrix A = RowMatrix::Zero(rows, dim);
  Vec b(rows);
  Eigen::Index r = 0;
  for (int i = 0; i < dim; ++i) {
    A(r, i) = -1.0;
    b(r++) = 0.0;
    A(r, i) = 1.0;
    b(r++) = set.prior_g_ub;
  }
  // Cut rows are scaled to unit norm so slacks and LP tolerances are distances.
  auto put = [&](const Vec& a, double sign) {
    const double norm = a.norm();
    A.row(r) = sign * a.transpose() / norm;
    b(r++) = sign / norm;
  };
  for (const auto& pair : set.pairs) {
    if (pair.upper) put(*pair.upper, -1.0);
    if (pair.lower) put(*pair.lower, 1.0);
  }
  return Polyhedron(std::move(A), std::move(b));
}

Polyhedron Polyhedron::box(const Vec& lo, const Vec& hi) {
  const auto dim = lo.size();
  RowMatrix A = RowMatrix::Zero(2 * dim, dim);
  Vec b(2 * dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    A(2 * i, i) = -1.0;
    b(2 * i) = -lo(i);
    A(2 * i + 1, i) = 1.0;
    b(2 * i + 1) = hi(i);
  }
  return Polyhedron(std::move(A), std::move(b));
}

bool Polyhedron::contains(const Vec& x, double tol) const {
  return (slacks(x).array() >= -tol).all();
}

bool Polyhedron::strictly_contains(const Vec& x, double tol) const {
  return (slacks(x).array() > tol).all();
}

Polyhedron Polyhedron::without_redundant(const BoundingBox& enclosing) const {
  // P = (rows that cut the box) ∩ box, because every dropped row contains the box.
  const Eigen::Index n = A_.cols();
  std::vector<Eigen::Index> keep;
  keep.reserve(static_cast<std::size_t>(A_.rows()));
  for (Eigen::Index r = 0; r < A_.rows(); ++r) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double a = A_(r, i);
      worst += a > 0.0 ? a * enclosing.hi(i) : a * enclosing.lo(i);
    }
    if (worst > b_(r)) keep.push_back(r);
  }
  const Polyhedron frame = box(enclosing.lo, enclosing.hi);
  RowMatrix A(static_cast<Eigen::Index>(keep.size()) + frame.size(), n);
  Vec b(A.rows());
  Eigen::Index r = 0;
  for (Eigen::Index k : keep) {
    A.row(r) = A_.row(k);
    b(r++) = b_(k);
  }
  A.bottomRows(frame.size()) = frame.A();
  b.tail(frame.size()) = frame.b();
  return Polyhedron(std::move(A), std::move(b));
}

LpResult lp_solve(const Vec& objective, Sense sense, const Polyhedron& P) {
  const Vec c = sense == Sense::Maximize ? objective : Vec(-objective);
  LpSolution sol = maximize_lp(P.A(), P.b(), c);
  LpResult out;
  out.point = std::move(sol.x);
  out.optimum = objective.dot(out.point);
  return out;
}

BoundingBox bounding_box(const Polyhedron& P) {
  const int n = P.dim();
  BoundingBox box{Vec(n), Vec(n)};
  for (int i = 0; i < n; ++i) {
    const Vec e = Vec::Unit(n, i);
    box.lo(i) = lp_solve(e, Sense::Minimize, P).optimum;
    box.hi(i) = lp_solve(e, Sense::Maximize, P).optimum;
    if (box.hi(i) < box.lo(i)) box.hi(i) = box.lo(i);
  }
  return box;
}

ChebyshevBall chebyshev_center(const Polyhedron& P) {
  const int n = P.dim();
  RowMatrix A(P.size(), n + 1);
  A.leftCols(n) = P.A();
  A.col(n) = P.A().rowwise().norm();
  Vec c = Vec::Zero(n + 1);
  c(n) = 1.0;
  const LpSolution sol = maximize_lp(A, P.b(), c);
  const double radius = sol.x(n);
  if (radius < -kLpTolerance) {
    throw Error(ErrorCode::EmptyPolyhedron, "uncertainty set is empty");
  }
  if (radius <= kDegenerateRadius) {
    throw Error(ErrorCode::DegeneratePolyhedron,
                "uncertainty set has no interior (radius " + std::to_string(radius) + ")");
  }
  return {sol.x.head(n), radius};
}

namespace {

class ChordWalker {
 public:
  // With `shape` set, directions are drawn from N(0, shape^-1) instead of the
  // isotropic law; any fixed symmetric law keeps the uniform target.
  ChordWalker(const Polyhedron& P, const Vec& start, const Eigen::MatrixXd* shape = nullptr)
      : P_(P), x_(start), s_(P.slacks(start)), ad_(P.size()), d_(P.dim()) {
    if (shape) {
      Eigen::LLT<Eigen::MatrixXd> llt(*shape);
      if (llt.info() == Eigen::Success) {
        upper_ = llt.matrixU();
        shaped_ = true;
      }
    }
    if (!(s_.array() > 0.0).all()) {
      throw Error(ErrorCode::DegeneratePolyhedron, "Hit-and-Run start point is not strictly interior");
    }
  }

  void step(Rng& rng) {
    std::normal_distribution<double> normal;
    do {
      for (Eigen::Index i = 0; i < d_.size(); ++i) d_(i) = normal(rng);
    } while (d_.squaredNorm() == 0.0);
    if (shaped_) upper_.triangularView<Eigen::Upper>().solveInPlace(d_);
    d_.normalize();
    ad_.noalias() = P_.A() * d_;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < ad_.size(); ++r) {
      const double a = ad_(r);
      if (a > 0.0) {
        hi = std::min(hi, s_(r) / a);
      } else if (a < 0.0) {
        lo = std::max(lo, s_(r) / a);
      }
    }
    if (!(hi - lo >= kChordCollapse) || !std::isfinite(hi - lo)) {
      throw Error(ErrorCode::ChordCollapse, "Hit-and-Run chord collapsed");
    }
    double lambda = 0.5 * (lo + hi);
    for (int attempt = 0; attempt < 16; ++attempt) {
      const double candidate = lo + uniform01(rng) * (hi - lo);
      if (((s_ - candidate * ad_).array() > 0.0).all()) {
        lambda = candidate;
        break;
      }
    }
    x_ += lambda * d_;
    s_ -= lambda * ad_;
    if (++steps_ % 64 == 0) s_ = P_.slacks(x_);
  }

  const Vec& point() const { return x_; }

 private:
  const Polyhedron& P_;
  Vec x_;
  Vec s_;
  Vec ad_;
  Vec d_;
  Eigen::MatrixXd upper_;
  bool shaped_ = false;
  long steps_ = 0;
};

}  // namespace

std::vector<Vec> hit_and_run(const Polyhedron& P, int n_samples, int burn_in, const Vec& start,
                             Rng& rng) {
  ChordWalker walker(P, start);
  for (int i = 0; i < burn_in; ++i) walker.step(rng);
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(std::max(n_samples, 0)));
  for (int i = 0; i < n_samples; ++i) {
    walker.step(rng);
    out.push_back(walker.point());
  }
  return out;
}

Vec center_of_gravity(const Polyhedron& P, const SamplerSettings& settings, Rng& rng) {
  return center_of_gravity_seeded(P, settings, rng, {}, 0).center;
}

namespace {

// Smallest slack measured as a distance; positive means strictly interior.
double interior_depth(const Polyhedron& P, const Vec& x) {
  return (P.slacks(x).array() / P.A().rowwise().norm().array()).minCoeff();
}

}  // namespace

CgEstimate center_of_gravity_seeded(const Polyhedron& P, const SamplerSettings& settings, Rng& rng,
                                    const std::vector<Vec>& seeds, int keep) {
  std::optional<Vec> start;
  double best = 0.0;
  auto consider = [&](const Vec& x) {
    const double depth = interior_depth(P, x);
    if (depth > best) {
      best = depth;
      start = x;
    }
  };
  // On a sliver the LP can report "empty" from round-off alone. An interior
  // seed settles the question, and without one we report a flat set.
  try {
    consider(chebyshev_center(P).center);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegeneratePolyhedron && e.code() != ErrorCode::EmptyPolyhedron) {
      throw;
    }
  }
  for (const Vec& s : seeds) {
    if (s.size() == P.dim()) consider(s);
  }
  if (!start) {
    throw Error(ErrorCode::DegeneratePolyhedron, "no strictly interior start point for sampling");
  }

  // The analytic center is a deep start and its barrier Hessian describes the
  // shape of P, which keeps the walk mixing when P is long and thin.
  const AnalyticCenterResult ac = analytic_center(P, *start, NewtonSettings{});
  const Vec inv = P.slacks(ac.center).cwiseInverse();
  const RowMatrix W = inv.asDiagonal() * P.A();
  const Eigen::MatrixXd hessian = W.transpose() * W;
  const bool deep = interior_depth(P, ac.center) > 0.0;
  ChordWalker walker(P, deep ? ac.center : *start, &hessian);
  for (int i = 0; i < settings.burn_in; ++i) walker.step(rng);
  CgEstimate out;
  out.center = Vec::Zero(P.dim());
  const int stride = keep > 0 ? std::max(settings.samples / keep, 1) : 0;
  for (int i = 0; i < settings.samples; ++i) {
    walker.step(rng);
    out.center += walker.point();
    if (stride > 0 && (i + 1) % stride == 0 && static_cast<int>(out.seeds.size()) < keep) {
      out.seeds.push_back(walker.point());
    }
  }
  out.center /= static_cast<double>(std::max(settings.samples, 1));
  return out;
}

double barrier_value(const Polyhedron& P, const Vec& x) {
  const Vec s = P.slacks(x);
  if (!(s.array() > 0.0).all()) return std::numeric_limits<double>::infinity();
  return -s.array().log().sum();
}

Vec barrier_gradient(const Polyhedron& P, const Vec& x) {
  const Vec inv = P.slacks(x).cwiseInverse();
  return P.A().transpose() * inv;
}

AnalyticCenterResult analytic_center(const Polyhedron& P, const std::optional<Vec>& warm_start,
                                     const NewtonSettings& settings) {
  AnalyticCenterResult res;
  if (warm_start && P.strictly_contains(*warm_start)) {
    res.center = *warm_start;
  } else {
    res.center = chebyshev_center(P).center;
  }
  Vec& x = res.center;
  double phi = barrier_value(P, x);
  for (res.iterations = 0; res.iterations < settings.max_iter; ++res.iterations) {
    const Vec inv = P.slacks(x).cwiseInverse();
    const Vec grad = P.A().transpose() * inv;
    const RowMatrix W = inv.asDiagonal() * P.A();
    const Eigen::MatrixXd H = W.transpose() * W;
    const Vec dx = -H.ldlt().solve(grad);
    res.decrement_sq = -grad.dot(dx);
    if (!std::isfinite(res.decrement_sq)) break;
    if (res.decrement_sq / 2.0 < settings.tol) {
      // One extra full step drives the gradient well below the stopping test.
      const Vec trial = x + dx;
      const double phi_trial = barrier_value(P, trial);
      if (phi_trial <= phi) x = trial;
      res.converged = true;
      ++res.iterations;
      break;
    }
    double t = 1.0;
    int halvings = 0;
    while (!P.strictly_contains(x + t * dx, 0.0) && halvings < 200) {
      t *= settings.beta;
      ++halvings;
    }
    double phi_new = barrier_value(P, x + t * dx);
    while (phi_new > phi - settings.alpha * t * res.decrement_sq && halvings < 200) {
      t *= settings.beta;
      ++halvings;
      phi_new = barrier_value(P, x + t * dx);
    }
    if (!(phi_new <= phi)) break;  // no progress possible at this precision
    x += t * dx;
    phi = phi_new;
  }
  if (!res.converged) res.converged = res.decrement_sq / 2.0 < settings.tol;
  return res;
}

double d_max(const Vec& center, const BoundingBox& box) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < center.size(); ++i) {
    const double far = std::max(std::abs(center(i) - box.lo(i)), std::abs(center(i) - box.hi(i)));
    sum += far * far;
  }
  return std::sqrt(sum);
}

}  // namespace crlearn
