#include "qhelly/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace qhelly {

namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kCostTol = 1e-10;
constexpr int kStallBeforeBland = 50;
constexpr int kMaxPivots = 100000;

enum class RunStatus { Optimal, Unbounded };

// Tableau with the objective in the last row, stored as reduced costs of a
// maximization; the bottom-right entry carries the current objective value.
class Tableau {
 public:
  Tableau(Eigen::Index rows, Eigen::Index cols) : t_(Matrix::Zero(rows + 1, cols + 1)), basis_(rows, -1) {}

  Eigen::Index rows() const { return t_.rows() - 1; }
  Eigen::Index cols() const { return t_.cols() - 1; }
  double& at(Eigen::Index r, Eigen::Index c) { return t_(r, c); }
  double& rhs(Eigen::Index r) { return t_(r, cols()); }
  double& cost(Eigen::Index c) { return t_(rows(), c); }
  double value() const { return t_(t_.rows() - 1, t_.cols() - 1); }
  std::vector<Eigen::Index>& basis() { return basis_; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  // Rebuild the objective row from raw costs and price out the basis.
  void set_objective(const Vector& costs) {
    t_.row(rows()).setZero();
    t_.row(rows()).head(costs.size()) = -costs.transpose();
    for (Eigen::Index r = 0; r < rows(); ++r) {
      const Eigen::Index b = basis_[static_cast<std::size_t>(r)];
      const double f = t_(rows(), b);
      if (f != 0.0) t_.row(rows()) -= f * t_.row(r);
    }
  }

  RunStatus run(Eigen::Index allowed_cols) {
    bool bland = false;
    int stall = 0;
    double last = value();
    for (int iter = 0; iter < kMaxPivots; ++iter) {
      Eigen::Index enter = -1;
      double best = -kCostTol;
      for (Eigen::Index j = 0; j < allowed_cols; ++j) {
        const double rc = t_(rows(), j);
        if (rc < best) {
          enter = j;
          if (bland) break;
          best = rc;
        }
      }
      if (enter < 0) return RunStatus::Optimal;

      Eigen::Index leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < rows(); ++i) {
        const double a = t_(i, enter);
        if (a <= kPivotTol) continue;
        const double ratio = t_(i, cols()) / a;
        if (ratio < best_ratio - 1e-12 ||
            (ratio <= best_ratio + 1e-12 && leave >= 0 &&
             basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          best_ratio = std::min(best_ratio, ratio);
          leave = i;
        }
      }
      if (leave < 0) return RunStatus::Unbounded;
      pivot(leave, enter);

      if (value() > last + 1e-12) {
        stall = 0;
        last = value();
      } else if (++stall > kStallBeforeBland) {
        bland = true;
      }
    }
    throw Error(ErrorKind::MaxIterations, "simplex pivot limit reached");
  }

 private:
  Matrix t_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace

LpResult solve_lp(const Matrix& normals, const Vector& offsets, const Vector& objective) {
  const Eigen::Index m = normals.rows();
  const Eigen::Index n = normals.cols();
  if (offsets.size() != m || objective.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "solve_lp: inconsistent sizes");
  }
  LpResult result;
  if (m == 0) {
    if (objective.norm() > 0.0) {
      result.status = LpStatus::Unbounded;
    } else {
      result.status = LpStatus::Optimal;
      result.x = Vector::Zero(n);
    }
    return result;
  }

  // Columns: x+ (n), x- (n), slacks (m), artificials (one per negative rhs).
  std::vector<Eigen::Index> needs_art;
  for (Eigen::Index i = 0; i < m; ++i)
    if (offsets(i) < 0.0) needs_art.push_back(i);
  const Eigen::Index n_struct = 2 * n + m;
  const auto n_art = static_cast<Eigen::Index>(needs_art.size());
  Tableau tab(m, n_struct + n_art);

  for (Eigen::Index i = 0; i < m; ++i) {
    const double sign = offsets(i) < 0.0 ? -1.0 : 1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      tab.at(i, j) = sign * normals(i, j);
      tab.at(i, n + j) = -sign * normals(i, j);
    }
    tab.at(i, 2 * n + i) = sign;
    tab.rhs(i) = sign * offsets(i);
    tab.basis()[static_cast<std::size_t>(i)] = 2 * n + i;
  }
  for (Eigen::Index k = 0; k < n_art; ++k) {
    const Eigen::Index row = needs_art[static_cast<std::size_t>(k)];
    tab.at(row, n_struct + k) = 1.0;
    tab.basis()[static_cast<std::size_t>(row)] = n_struct + k;
  }

  if (n_art > 0) {
    Vector phase1 = Vector::Zero(n_struct + n_art);
    phase1.tail(n_art).setConstant(-1.0);
    tab.set_objective(phase1);
    tab.run(n_struct + n_art);
    const double scale = std::max(1.0, offsets.cwiseAbs().maxCoeff());
    if (tab.value() < -1e-9 * scale) {
      result.status = LpStatus::Infeasible;
      return result;
    }
    // Drive remaining zero-level artificials out of the basis.
    for (Eigen::Index r = 0; r < m; ++r) {
      if (tab.basis()[static_cast<std::size_t>(r)] < n_struct) continue;
      for (Eigen::Index j = 0; j < n_struct; ++j) {
        if (std::abs(tab.at(r, j)) > 1e-9) {
          tab.pivot(r, j);
          break;
        }
      }
    }
  }

  Vector costs = Vector::Zero(n_struct + n_art);
  costs.head(n) = objective;
  costs.segment(n, n) = -objective;
  tab.set_objective(costs);
  if (tab.run(n_struct) == RunStatus::Unbounded) {
    result.status = LpStatus::Unbounded;
    return result;
  }

  Vector z = Vector::Zero(n_struct + n_art);
  for (Eigen::Index r = 0; r < m; ++r) z(tab.basis()[static_cast<std::size_t>(r)]) = tab.rhs(r);
  result.status = LpStatus::Optimal;
  result.x = z.head(n) - z.segment(n, n);
  result.value = objective.dot(result.x);
  return result;
}

ChebyshevBall chebyshev_center(const HPolytope& p, double radius_cap) {
  const auto d = static_cast<Eigen::Index>(p.dim());
  const auto m = static_cast<Eigen::Index>(p.size());
  Matrix a(m + 1, d + 1);
  Vector b(m + 1);
  a.topLeftCorner(m, d) = p.normal_matrix();
  a.topRightCorner(m, 1).setOnes();
  b.head(m) = p.offset_vector();
  a.bottomRows(1).setZero();
  a(m, d) = 1.0;
  b(m) = radius_cap;
  Vector c = Vector::Zero(d + 1);
  c(d) = 1.0;
  const LpResult lp = solve_lp(a, b, c);
  if (lp.status != LpStatus::Optimal) {
    throw Error(ErrorKind::InvalidArgument, "Chebyshev LP failed unexpectedly");
  }
  ChebyshevBall ball;
  ball.center = lp.x.head(d);
  ball.radius = lp.x(d);
  return ball;
}

std::optional<Vector> lp_feasible(const HPolytope& p, double tol) {
  if (p.empty()) return Vector::Zero(static_cast<Eigen::Index>(p.dim()));
  const ChebyshevBall ball = chebyshev_center(p, 1.0);
  if (ball.radius < -tol) return std::nullopt;
  return ball.center;
}

std::optional<double> polytope_support(const HPolytope& p, const Vector& direction) {
  require_same_dim(p.dim(), static_cast<std::size_t>(direction.size()), "polytope_support");
  const LpResult lp = solve_lp(p.normal_matrix(), p.offset_vector(), direction);
  switch (lp.status) {
    case LpStatus::Optimal: return lp.value;
    case LpStatus::Unbounded: return std::nullopt;
    case LpStatus::Infeasible: break;
  }
  throw Error(ErrorKind::EmptyInterior, "support of an empty polytope");
}

bool is_bounded(const HPolytope& p) {
  const auto d = static_cast<Eigen::Index>(p.dim());
  const Matrix a = p.normal_matrix();
  const Vector b = p.offset_vector();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (double sign : {1.0, -1.0}) {
      Vector c = Vector::Zero(d);
      c(i) = sign;
      const LpResult lp = solve_lp(a, b, c);
      if (lp.status == LpStatus::Infeasible) return true;
      if (lp.status == LpStatus::Unbounded) return false;
    }
  }
  return true;
}

bool has_interior(const HPolytope& p, double tol) {
  if (p.empty()) return true;
  return chebyshev_center(p, 1.0).radius > tol;
}

}  // namespace qhelly
