#include "qhelly/geometry.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

namespace qhelly {

namespace {

Matrix symmetric_part(const Matrix& m) { return 0.5 * (m + m.transpose()); }

Matrix spd_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetric_part(m));
  Vector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return symmetric_part(eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose());
}

}  // namespace

void require_same_dim(std::size_t a, std::size_t b, const char* where) {
  if (a != b) {
    std::ostringstream msg;
    msg << where << ": dimension " << a << " vs " << b;
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
}

HalfSpace::HalfSpace(Vector normal, double offset, std::optional<Provenance> tag)
    : normal_(std::move(normal)), offset_(offset), tag_(tag) {
  const double norm = normal_.norm();
  if (!(norm > 0.0) || !std::isfinite(norm) || !std::isfinite(offset_)) {
    throw Error(ErrorKind::ZeroDirection, "half-space normal must be finite and nonzero");
  }
  normal_ /= norm;
  offset_ /= norm;
}

HalfSpace HalfSpace::with_provenance(Provenance tag) const {
  HalfSpace copy = *this;
  copy.tag_ = tag;
  return copy;
}

HPolytope::HPolytope(std::size_t dim, std::vector<HalfSpace> halfspaces)
    : dim_(dim), halfspaces_(std::move(halfspaces)) {
  if (dim_ == 0) throw Error(ErrorKind::InvalidArgument, "polytope dimension must be positive");
  for (const auto& h : halfspaces_) require_same_dim(dim_, h.dim(), "HPolytope");
}

HPolytope HPolytope::from_matrix(const Matrix& normals, const Vector& offsets) {
  if (normals.rows() != offsets.size()) {
    throw Error(ErrorKind::DimensionMismatch, "normal rows and offsets differ in count");
  }
  std::vector<HalfSpace> hs;
  hs.reserve(static_cast<std::size_t>(normals.rows()));
  for (Eigen::Index i = 0; i < normals.rows(); ++i) {
    hs.emplace_back(normals.row(i).transpose(), offsets(i));
  }
  return HPolytope(static_cast<std::size_t>(normals.cols()), std::move(hs));
}

HPolytope HPolytope::box(const Vector& lo, const Vector& hi) {
  require_same_dim(static_cast<std::size_t>(lo.size()), static_cast<std::size_t>(hi.size()), "box");
  const auto d = static_cast<std::size_t>(lo.size());
  std::vector<HalfSpace> hs;
  for (std::size_t i = 0; i < d; ++i) {
    Vector e = Vector::Zero(lo.size());
    e(static_cast<Eigen::Index>(i)) = 1.0;
    hs.emplace_back(e, hi(static_cast<Eigen::Index>(i)));
    hs.emplace_back(-e, -lo(static_cast<Eigen::Index>(i)));
  }
  return HPolytope(d, std::move(hs));
}

HPolytope HPolytope::cube(std::size_t dim, double half_width) {
  const auto n = static_cast<Eigen::Index>(dim);
  return box(Vector::Constant(n, -half_width), Vector::Constant(n, half_width));
}

Matrix HPolytope::normal_matrix() const {
  Matrix a(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(dim_));
  for (std::size_t i = 0; i < size(); ++i) a.row(static_cast<Eigen::Index>(i)) = halfspaces_[i].normal().transpose();
  return a;
}

Vector HPolytope::offset_vector() const {
  Vector b(static_cast<Eigen::Index>(size()));
  for (std::size_t i = 0; i < size(); ++i) b(static_cast<Eigen::Index>(i)) = halfspaces_[i].offset();
  return b;
}

HPolytope HPolytope::tagged(Provenance tag) const {
  std::vector<HalfSpace> hs;
  hs.reserve(size());
  for (const auto& h : halfspaces_) hs.push_back(h.with_provenance(tag));
  return HPolytope(dim_, std::move(hs));
}

HPolytope HPolytope::with(HalfSpace h) const {
  require_same_dim(dim_, h.dim(), "HPolytope::with");
  auto hs = halfspaces_;
  hs.push_back(std::move(h));
  return HPolytope(dim_, std::move(hs));
}

Ellipsoid::Ellipsoid(Matrix shape, Vector center) : shape_(std::move(shape)), center_(std::move(center)) {
  const auto d = center_.size();
  if (d == 0 || shape_.rows() != d || shape_.cols() != d) {
    throw Error(ErrorKind::DimensionMismatch, "ellipsoid shape must be d x d with d = center size");
  }
  if (!shape_.allFinite() || !center_.allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "ellipsoid entries must be finite");
  }
  const double asym = (shape_ - shape_.transpose()).norm();
  if (asym > 1e-10 * std::max(1.0, shape_.norm())) {
    throw Error(ErrorKind::InvalidArgument, "ellipsoid shape matrix is not symmetric");
  }
  shape_ = symmetric_part(shape_);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(shape_, Eigen::EigenvaluesOnly);
  if (!(eig.eigenvalues().minCoeff() > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "ellipsoid shape matrix is not positive definite");
  }
}

Ellipsoid Ellipsoid::ball(std::size_t dim, double radius) {
  return ball(Vector::Zero(static_cast<Eigen::Index>(dim)), radius);
}

Ellipsoid Ellipsoid::ball(Vector center, double radius) {
  const auto d = center.size();
  return Ellipsoid(radius * Matrix::Identity(d, d), std::move(center));
}

Ellipsoid Ellipsoid::from_factor(const Matrix& factor, Vector center) {
  return Ellipsoid(spd_sqrt(factor * factor.transpose()), std::move(center));
}

AffineMap::AffineMap(Matrix linear, Vector shift) : linear_(std::move(linear)), shift_(std::move(shift)) {
  const auto d = shift_.size();
  if (linear_.rows() != d || linear_.cols() != d) {
    throw Error(ErrorKind::DimensionMismatch, "affine map linear part must be d x d");
  }
  Eigen::FullPivLU<Matrix> lu(linear_);
  if (!lu.isInvertible() || !std::isfinite(linear_.determinant()) || linear_.determinant() == 0.0) {
    throw Error(ErrorKind::SingularMap, "affine map linear part is singular");
  }
}

AffineMap AffineMap::identity(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return AffineMap(Matrix::Identity(d, d), Vector::Zero(d));
}

AffineMap AffineMap::inverse() const {
  Matrix inv = linear_.inverse();
  Vector shift = -(inv * shift_);
  return AffineMap(std::move(inv), std::move(shift));
}

AffineMap AffineMap::compose(const AffineMap& inner) const {
  require_same_dim(dim(), inner.dim(), "AffineMap::compose");
  return AffineMap(linear_ * inner.linear_, linear_ * inner.shift_ + shift_);
}

double unit_ball_volume(std::size_t dim) {
  const double half = 0.5 * static_cast<double>(dim);
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

double ball_radius_for_volume(std::size_t dim, double volume) {
  return std::pow(volume / unit_ball_volume(dim), 1.0 / static_cast<double>(dim));
}

double ellipsoid_volume(const Ellipsoid& e) { return e.shape().determinant() * unit_ball_volume(e.dim()); }

double log_ellipsoid_volume(const Ellipsoid& e) {
  Eigen::LLT<Matrix> llt(e.shape());
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum() + std::log(unit_ball_volume(e.dim()));
}

double ellipsoid_height(const Ellipsoid& e) {
  const auto d = static_cast<Eigen::Index>(e.dim());
  return e.center()(d - 1) + e.shape().col(d - 1).norm();
}

double min_semiaxis(const Ellipsoid& e) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(e.shape(), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

double max_semiaxis(const Ellipsoid& e) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(e.shape(), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

double support_value(const Ellipsoid& e, const Vector& direction) {
  require_same_dim(e.dim(), static_cast<std::size_t>(direction.size()), "support_value");
  if (!(direction.norm() > 0.0)) throw Error(ErrorKind::ZeroDirection, "support direction is zero");
  return direction.dot(e.center()) + (e.shape() * direction).norm();
}

double containment_margin(const Ellipsoid& e, const HPolytope& p) {
  require_same_dim(e.dim(), p.dim(), "containment_margin");
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& h : p.halfspaces()) margin = std::min(margin, h.offset() - support_value(e, h.normal()));
  return margin;
}

bool ellipsoid_in_polytope(const Ellipsoid& e, const HPolytope& p, double tol) {
  require_same_dim(e.dim(), p.dim(), "ellipsoid_in_polytope");
  return std::all_of(p.halfspaces().begin(), p.halfspaces().end(),
                     [&](const HalfSpace& h) { return support_value(e, h.normal()) <= h.offset() + tol; });
}

HPolytope transform_polytope(const AffineMap& t, const HPolytope& p) {
  require_same_dim(t.dim(), p.dim(), "transform_polytope");
  // {x : a.x <= b} maps to {y : (L^-T a).y <= b + (L^-T a).s}.
  const Matrix inv_t = t.linear().inverse().transpose();
  std::vector<HalfSpace> hs;
  hs.reserve(p.size());
  for (const auto& h : p.halfspaces()) {
    Vector a = inv_t * h.normal();
    const double b = h.offset() + a.dot(t.shift());
    hs.emplace_back(std::move(a), b, h.provenance());
  }
  return HPolytope(p.dim(), std::move(hs));
}

Ellipsoid transform_ellipsoid(const AffineMap& t, const Ellipsoid& e) {
  require_same_dim(t.dim(), e.dim(), "transform_ellipsoid");
  return Ellipsoid::from_factor(t.linear() * e.shape(), t.apply(e.center()));
}

HPolytope intersect(const HPolytope& p, const HPolytope& q) {
  require_same_dim(p.dim(), q.dim(), "intersect");
  auto hs = p.halfspaces();
  hs.insert(hs.end(), q.halfspaces().begin(), q.halfspaces().end());
  return HPolytope(p.dim(), std::move(hs));
}

HPolytope intersect_all(const std::vector<const HPolytope*>& parts) {
  if (parts.empty()) throw Error(ErrorKind::InvalidArgument, "intersect_all of nothing");
  std::vector<HalfSpace> hs;
  for (const auto* part : parts) {
    require_same_dim(parts.front()->dim(), part->dim(), "intersect_all");
    hs.insert(hs.end(), part->halfspaces().begin(), part->halfspaces().end());
  }
  return HPolytope(parts.front()->dim(), std::move(hs));
}

double ellipsoid_distance(const Ellipsoid& a, const Ellipsoid& b) {
  require_same_dim(a.dim(), b.dim(), "ellipsoid_distance");
  const double scale = std::max(1.0, max_semiaxis(a));
  return ((a.shape() - b.shape()).norm() + (a.center() - b.center()).norm()) / scale;
}

HalfSpace height_cap(std::size_t dim, double level) {
  Vector e = Vector::Zero(static_cast<Eigen::Index>(dim));
  e(static_cast<Eigen::Index>(dim) - 1) = 1.0;
  return HalfSpace(std::move(e), level);
}

}  // namespace qhelly
