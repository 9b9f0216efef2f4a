#include "qhelly/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include "qhelly/lp.hpp"

namespace qhelly {

namespace {

// Symmetric matrices are parametrized by their upper triangle; parameter k
// multiplies E_k = e_p e_q^T + e_q e_p^T (or e_p e_p^T on the diagonal).
class SymParam {
 public:
  explicit SymParam(Eigen::Index dim) : dim_(dim) {
    for (Eigen::Index p = 0; p < dim; ++p)
      for (Eigen::Index q = p; q < dim; ++q) pairs_.emplace_back(p, q);
  }

  Eigen::Index dim() const { return dim_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(pairs_.size()); }

  Matrix unpack(const Vector& x) const {
    Matrix m(dim_, dim_);
    for (Eigen::Index k = 0; k < size(); ++k) {
      const auto [p, q] = pairs_[static_cast<std::size_t>(k)];
      m(p, q) = m(q, p) = x(k);
    }
    return m;
  }

  Vector pack(const Matrix& m) const {
    Vector x(size());
    for (Eigen::Index k = 0; k < size(); ++k) {
      const auto [p, q] = pairs_[static_cast<std::size_t>(k)];
      x(k) = 0.5 * (m(p, q) + m(q, p));
    }
    return x;
  }

  // Column k is E_k a.
  Matrix apply_basis(const Vector& a) const {
    Matrix j = Matrix::Zero(dim_, size());
    for (Eigen::Index k = 0; k < size(); ++k) {
      const auto [p, q] = pairs_[static_cast<std::size_t>(k)];
      if (p == q) {
        j(p, k) = a(p);
      } else {
        j(p, k) = a(q);
        j(q, k) = a(p);
      }
    }
    return j;
  }

  // Gradient G_k = tr(W E_k) and Hessian H_kl = tr(W E_k W E_l) of
  // log det, the latter with the sign of -log det (positive definite).
  void logdet_derivatives(const Matrix& inv, Vector& grad, Matrix& hess) const {
    std::vector<Matrix> m(static_cast<std::size_t>(size()));
    grad.resize(size());
    for (Eigen::Index k = 0; k < size(); ++k) {
      const auto [p, q] = pairs_[static_cast<std::size_t>(k)];
      Matrix& mk = m[static_cast<std::size_t>(k)];
      mk = Matrix::Zero(dim_, dim_);
      mk.col(q) += inv.col(p);
      if (p != q) mk.col(p) += inv.col(q);
      grad(k) = mk.trace();
    }
    hess.resize(size(), size());
    for (Eigen::Index k = 0; k < size(); ++k) {
      for (Eigen::Index l = k; l < size(); ++l) {
        const double v = m[static_cast<std::size_t>(k)]
                             .cwiseProduct(m[static_cast<std::size_t>(l)].transpose())
                             .sum();
        hess(k, l) = hess(l, k) = v;
      }
    }
  }

 private:
  Eigen::Index dim_;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs_;
};

struct Evaluation {
  double value = 0.0;
  Vector grad;
  Matrix hess;
};

// Returns false when x lies outside the barrier domain.
using Evaluator = std::function<bool(const Vector& x, double t, bool derivatives, Evaluation& out)>;

struct PathResult {
  Vector x;
  double t = 0.0;
  int steps = 0;
};

// Accumulates -log(s^2 - |B a|^2) for every containment constraint
// |B a_i| + a_i . c <= b_i.  Variables: [vech B | c | ...].
bool add_containment_barrier(const SymParam& sym, const Matrix& normals, const Vector& offsets,
                             const Matrix& shape, const Vector& center, bool derivatives, Evaluation& out) {
  const Eigen::Index p = sym.size();
  const Eigen::Index d = sym.dim();
  for (Eigen::Index i = 0; i < normals.rows(); ++i) {
    const Vector a = normals.row(i).transpose();
    const double s = offsets(i) - a.dot(center);
    if (!(s > 0.0)) return false;
    const Vector v = shape * a;
    const double g = s * s - v.squaredNorm();
    if (!(g > 0.0)) return false;
    out.value -= std::log(g);
    if (!derivatives) continue;

    const Matrix jac = sym.apply_basis(a);
    Vector grad_g = Vector::Zero(out.grad.size());
    grad_g.head(p) = -2.0 * jac.transpose() * v;
    grad_g.segment(p, d) = -2.0 * s * a;
    out.grad -= grad_g / g;
    out.hess.noalias() += grad_g * grad_g.transpose() / (g * g);
    out.hess.topLeftCorner(p, p).noalias() += (2.0 / g) * jac.transpose() * jac;
    out.hess.block(p, p, d, d).noalias() -= (2.0 / g) * a * a.transpose();
  }
  return true;
}

PathResult follow_central_path(const Evaluator& eval, Vector x, double nu, double gap_target,
                               const SolverSettings& settings) {
  PathResult result;
  double t = 1.0;
  Evaluation cur;
  Evaluation trial;
  const double growth = 1.0 / settings.barrier_decrease;

  while (true) {
    int inner = 0;
    while (true) {
      if (inner >= settings.max_iterations) {
        std::ostringstream msg;
        msg << "centering did not converge within " << settings.max_iterations << " Newton steps at t=" << t;
        throw Error(ErrorKind::MaxIterations, msg.str());
      }
      const auto n = x.size();
      cur.value = 0.0;
      cur.grad = Vector::Zero(n);
      cur.hess = Matrix::Zero(n, n);
      if (!eval(x, t, true, cur)) throw Error(ErrorKind::InvalidArgument, "barrier iterate left its domain");

      Eigen::LDLT<Matrix> ldlt(cur.hess);
      const Vector step = -ldlt.solve(cur.grad);
      const double decrement_sq = -cur.grad.dot(step);
      if (!std::isfinite(decrement_sq)) throw Error(ErrorKind::MaxIterations, "Newton system became singular");
      // Centered, or the step has shrunk to the roundoff floor of x.
      if (decrement_sq <= 1e-10 || step.norm() <= 1e-13 * (1.0 + x.norm())) break;
      ++inner;
      ++result.steps;

      auto feasible_value = [&](const Vector& y, double& value) {
        trial.value = 0.0;
        if (!eval(y, t, false, trial)) return false;
        value = trial.value;
        return std::isfinite(value);
      };

      double value = 0.0;
      if (decrement_sq < 0.0625 && feasible_value(x + step, value)) {
        // Inside the quadratic-convergence region of a self-concordant
        // function the full step is safe.
        x += step;
        continue;
      }
      double alpha = 1.0;
      bool moved = false;
      while (alpha > 1e-14) {
        const Vector y = x + alpha * step;
        if (feasible_value(y, value) && value <= cur.value - 0.25 * alpha * decrement_sq) {
          x = y;
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!moved) break;  // roundoff floor reached
    }
    if (nu / t <= gap_target) break;
    t *= growth;
  }
  result.x = std::move(x);
  result.t = t;
  return result;
}

// Uniform rescaling around the Chebyshev center keeps heights ordered and
// puts the barrier problem at unit scale.
struct Frame {
  Vector origin;
  double scale = 1.0;
  Matrix normals;
  Vector offsets;
};

Frame normalized_frame(const HPolytope& p, const SolverSettings& settings) {
  if (p.empty() || !is_bounded(p)) throw Error(ErrorKind::Unbounded, "polytope is unbounded");
  const ChebyshevBall ball = chebyshev_center(p);
  if (!(ball.radius > settings.feasibility_tol)) {
    throw Error(ErrorKind::EmptyInterior, "polytope has empty interior");
  }
  Frame f;
  f.origin = ball.center;
  f.scale = ball.radius;
  f.normals = p.normal_matrix();
  f.offsets = (p.offset_vector() - f.normals * f.origin) / f.scale;
  return f;
}

Ellipsoid to_original(const Frame& f, const Matrix& shape, const Vector& center) {
  return Ellipsoid(f.scale * shape, f.origin + f.scale * center);
}

SolveOutcome mvie_in_frame(const HPolytope& p, const Frame& frame, const SolverSettings& settings) {
  const auto d = static_cast<Eigen::Index>(p.dim());
  const SymParam sym(d);
  const Eigen::Index np = sym.size();

  Evaluator eval = [&](const Vector& x, double t, bool derivatives, Evaluation& out) {
    const Matrix shape = sym.unpack(x.head(np));
    Eigen::LLT<Matrix> llt(shape);
    if (llt.info() != Eigen::Success) return false;
    const double diag_min = llt.matrixLLT().diagonal().minCoeff();
    if (!(diag_min > 0.0)) return false;
    const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    out.value -= t * logdet;
    if (derivatives) {
      Vector g;
      Matrix h;
      sym.logdet_derivatives(llt.solve(Matrix::Identity(d, d)), g, h);
      out.grad.head(np) -= t * g;
      out.hess.topLeftCorner(np, np) += t * h;
    }
    return add_containment_barrier(sym, frame.normals, frame.offsets, shape, x.segment(np, d), derivatives, out);
  };

  Vector x0(np + d);
  x0.head(np) = sym.pack(0.5 * Matrix::Identity(d, d));
  x0.tail(d).setZero();
  const double nu = 2.0 * static_cast<double>(p.size());
  const PathResult path = follow_central_path(eval, x0, nu, 1e-2 * settings.kkt_tol, settings);

  SolveOutcome out{to_original(frame, sym.unpack(path.x.head(np)), path.x.tail(d)), 0.0, 0.0, {}, 0, std::nullopt};
  out.objective = ellipsoid_volume(out.ellipsoid);
  out.kkt_residual = nu / path.t;
  out.active_constraints = active_set(out.ellipsoid, p);
  out.newton_steps = path.steps;
  return out;
}

}  // namespace

void SolverSettings::validate() const {
  if (!(feasibility_tol > 0.0) || !(kkt_tol > 0.0) || max_iterations <= 0 || !(barrier_decrease > 0.0) ||
      !(barrier_decrease < 1.0) || !(crosscheck_tol > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "solver settings must be positive with barrier_decrease < 1");
  }
}

std::vector<std::size_t> active_set(const Ellipsoid& e, const HPolytope& p, double threshold) {
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i].offset() - support_value(e, p[i].normal()) <= threshold) active.push_back(i);
  }
  return active;
}

SolveOutcome mvie(const HPolytope& p, const SolverSettings& settings) {
  settings.validate();
  const Frame frame = normalized_frame(p, settings);
  return mvie_in_frame(p, frame, settings);
}

SolveOutcome lowest_ellipsoid(const HPolytope& p, double target_volume, const SolverSettings& settings) {
  settings.validate();
  if (!(target_volume > 0.0) || !std::isfinite(target_volume)) {
    throw Error(ErrorKind::InvalidArgument, "target volume must be positive");
  }
  const Frame frame = normalized_frame(p, settings);
  SolveOutcome widest = mvie_in_frame(p, frame, settings);

  const auto d = static_cast<Eigen::Index>(p.dim());
  const double dd = static_cast<double>(d);
  // log det bound in the normalized frame.
  const double kappa = std::log(target_volume / unit_ball_volume(p.dim())) - dd * std::log(frame.scale);
  const Matrix widest_shape = widest.ellipsoid.shape() / frame.scale;
  const Vector widest_center = (widest.ellipsoid.center() - frame.origin) / frame.scale;
  const double widest_logdet = std::log(widest_shape.determinant());

  if (widest_logdet < kappa - 1e-6) {
    std::ostringstream msg;
    msg << "largest inscribed ellipsoid has volume " << widest.objective << " < target " << target_volume;
    throw Error(ErrorKind::VolumeInfeasible, msg.str());
  }

  SolveOutcome out = widest;
  if (widest_logdet <= kappa + 1e-9) {
    // The maximum-volume ellipsoid is the only candidate.
    out.objective = ellipsoid_height(out.ellipsoid);
  } else {
    const SymParam sym(d);
    const Eigen::Index np = sym.size();
    const Eigen::Index ic = np;
    const Eigen::Index ih = np + d;
    Vector e_last = Vector::Zero(d);
    e_last(d - 1) = 1.0;
    const Matrix jac_height = sym.apply_basis(e_last);

    Evaluator eval = [&](const Vector& x, double t, bool derivatives, Evaluation& out_eval) {
      const Matrix shape = sym.unpack(x.head(np));
      const Vector center = x.segment(ic, d);
      const double h = x(ih);
      Eigen::LLT<Matrix> llt(shape);
      if (llt.info() != Eigen::Success || !(llt.matrixLLT().diagonal().minCoeff() > 0.0)) return false;
      const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
      const double q = logdet - kappa;
      if (!(q > 0.0) || !(h > 0.0)) return false;
      const Vector top = shape.col(d - 1);
      const double gh = h * h - top.squaredNorm();
      if (!(gh > 0.0)) return false;

      out_eval.value += t * (center(d - 1) + h) - std::log(q) - logdet - std::log(gh);
      if (derivatives) {
        out_eval.grad(ic + d - 1) += t;
        out_eval.grad(ih) += t;

        Vector g;
        Matrix hs;
        sym.logdet_derivatives(llt.solve(Matrix::Identity(d, d)), g, hs);
        out_eval.grad.head(np) -= g / q + g;
        out_eval.hess.topLeftCorner(np, np) += g * g.transpose() / (q * q) + hs / q + hs;

        Vector grad_gh = Vector::Zero(x.size());
        grad_gh.head(np) = -2.0 * jac_height.transpose() * top;
        grad_gh(ih) = 2.0 * h;
        out_eval.grad -= grad_gh / gh;
        out_eval.hess.noalias() += grad_gh * grad_gh.transpose() / (gh * gh);
        out_eval.hess.topLeftCorner(np, np).noalias() += (2.0 / gh) * jac_height.transpose() * jac_height;
        out_eval.hess(ih, ih) -= 2.0 / gh;
      }
      return add_containment_barrier(sym, frame.normals, frame.offsets, shape, center, derivatives, out_eval);
    };

    const double shrink = std::exp((kappa - widest_logdet) / (2.0 * dd));
    Vector x0(np + d + 1);
    x0.head(np) = sym.pack(shrink * widest_shape);
    x0.segment(ic, d) = widest_center;
    x0(ih) = shrink * widest_shape.col(d - 1).norm() + 1.0;
    const double nu = 2.0 * static_cast<double>(p.size()) + 2.0 + dd + 1.0;
    const PathResult path = follow_central_path(eval, x0, nu, 1e-2 * settings.kkt_tol, settings);

    out.ellipsoid = to_original(frame, sym.unpack(path.x.head(np)), path.x.segment(ic, d));
    out.objective = ellipsoid_height(out.ellipsoid);
    out.kkt_residual = nu / path.t;
    out.active_constraints = active_set(out.ellipsoid, p);
    out.newton_steps += path.steps;
  }

  if (settings.crosscheck_lowest) {
    const HPolytope capped = p.with(height_cap(p.dim(), out.objective));
    SolverSettings inner = settings;
    const SolveOutcome check = mvie(capped, inner);
    const double gap = ellipsoid_distance(out.ellipsoid, check.ellipsoid);
    out.crosscheck_distance = gap;
    if (gap > settings.crosscheck_tol) {
      std::ostringstream msg;
      msg << "lowest ellipsoid differs from mvie(P cap H_tau) by " << gap;
      throw Error(ErrorKind::CertificateFailed, msg.str());
    }
  }
  return out;
}

double polytope_volume_2d(const HPolytope& p) {
  if (p.dim() != 2) throw Error(ErrorKind::DimensionMismatch, "polytope_volume_2d needs dimension 2");
  if (!is_bounded(p)) throw Error(ErrorKind::Unbounded, "polytope is unbounded");
  const Matrix a = p.normal_matrix();
  const Vector b = p.offset_vector();
  const double tol = 1e-9 * std::max(1.0, b.cwiseAbs().maxCoeff());

  std::vector<Eigen::Vector2d> vertices;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < a.rows(); ++j) {
      Eigen::Matrix2d m;
      m << a(i, 0), a(i, 1), a(j, 0), a(j, 1);
      if (std::abs(m.determinant()) < 1e-12) continue;
      const Eigen::Vector2d v = m.inverse() * Eigen::Vector2d(b(i), b(j));
      if (((a * v).eval() - b).maxCoeff() > tol) continue;
      const bool dup = std::any_of(vertices.begin(), vertices.end(),
                                   [&](const Eigen::Vector2d& w) { return (w - v).norm() < tol; });
      if (!dup) vertices.push_back(v);
    }
  }
  if (vertices.size() < 3) return 0.0;

  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (const auto& v : vertices) centroid += v;
  centroid /= static_cast<double>(vertices.size());
  std::sort(vertices.begin(), vertices.end(), [&](const Eigen::Vector2d& u, const Eigen::Vector2d& w) {
    return std::atan2(u.y() - centroid.y(), u.x() - centroid.x()) <
           std::atan2(w.y() - centroid.y(), w.x() - centroid.x());
  });
  double twice_area = 0.0;
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    const auto& u = vertices[k];
    const auto& w = vertices[(k + 1) % vertices.size()];
    twice_area += u.x() * w.y() - w.x() * u.y();
  }
  return 0.5 * std::abs(twice_area);
}

}  // namespace qhelly
