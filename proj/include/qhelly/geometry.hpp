#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qhelly/error.hpp"

namespace qhelly {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Origin of a half-space inside a colored family: which class and which
/// member contributed it.
struct Provenance {
  std::size_t class_index = 0;
  std::size_t member_index = 0;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// Closed half-space {x : normal . x <= offset}. The normal is rescaled to
/// unit length on construction and the offset with it.
class HalfSpace {
 public:
  HalfSpace(Vector normal, double offset, std::optional<Provenance> tag = std::nullopt);

  const Vector& normal() const { return normal_; }
  double offset() const { return offset_; }
  std::size_t dim() const { return static_cast<std::size_t>(normal_.size()); }
  const std::optional<Provenance>& provenance() const { return tag_; }

  double slack(const Vector& x) const { return offset_ - normal_.dot(x); }
  HalfSpace with_provenance(Provenance tag) const;

 private:
  Vector normal_;
  double offset_;
  std::optional<Provenance> tag_;
};

/// Finite conjunction of half-spaces in a fixed dimension.
class HPolytope {
 public:
  explicit HPolytope(std::size_t dim, std::vector<HalfSpace> halfspaces = {});

  /// Builds from row normals A (m x d) and offsets b; rows are canonicalized.
  static HPolytope from_matrix(const Matrix& normals, const Vector& offsets);
  /// Axis-aligned box [lo_i, hi_i].
  static HPolytope box(const Vector& lo, const Vector& hi);
  /// Cube [-half_width, half_width]^d.
  static HPolytope cube(std::size_t dim, double half_width);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return halfspaces_.size(); }
  bool empty() const { return halfspaces_.empty(); }
  const std::vector<HalfSpace>& halfspaces() const { return halfspaces_; }
  const HalfSpace& operator[](std::size_t i) const { return halfspaces_[i]; }

  Matrix normal_matrix() const;
  Vector offset_vector() const;

  /// Copy with every half-space tagged by the given provenance.
  HPolytope tagged(Provenance tag) const;
  /// Copy with one extra half-space appended.
  HPolytope with(HalfSpace h) const;

 private:
  std::size_t dim_;
  std::vector<HalfSpace> halfspaces_;
};

/// {B u + c : |u| <= 1} with B symmetric positive definite.
class Ellipsoid {
 public:
  Ellipsoid(Matrix shape, Vector center);

  static Ellipsoid ball(std::size_t dim, double radius = 1.0);
  static Ellipsoid ball(Vector center, double radius);
  /// Accepts any invertible factor F and stores the SPD polar part
  /// sqrt(F F^T), which describes the same set.
  static Ellipsoid from_factor(const Matrix& factor, Vector center);

  std::size_t dim() const { return static_cast<std::size_t>(center_.size()); }
  const Matrix& shape() const { return shape_; }
  const Vector& center() const { return center_; }

 private:
  Matrix shape_;
  Vector center_;
};

/// x -> linear * x + shift, with invertible linear part.
class AffineMap {
 public:
  AffineMap(Matrix linear, Vector shift);

  static AffineMap identity(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(shift_.size()); }
  const Matrix& linear() const { return linear_; }
  const Vector& shift() const { return shift_; }
  double determinant() const { return linear_.determinant(); }

  Vector apply(const Vector& x) const { return linear_ * x + shift_; }
  AffineMap inverse() const;
  /// (this o inner)(x) = this(inner(x)).
  AffineMap compose(const AffineMap& inner) const;

 private:
  Matrix linear_;
  Vector shift_;
};

/// Volume of the d-dimensional unit ball.
double unit_ball_volume(std::size_t dim);

/// Radius of the ball of given volume in dimension d.
double ball_radius_for_volume(std::size_t dim, double volume);

double ellipsoid_volume(const Ellipsoid& e);
double log_ellipsoid_volume(const Ellipsoid& e);
/// max over E of x_d.
double ellipsoid_height(const Ellipsoid& e);
double min_semiaxis(const Ellipsoid& e);
double max_semiaxis(const Ellipsoid& e);
/// h_E(a) = a . c + |B a|.
double support_value(const Ellipsoid& e, const Vector& direction);

/// True iff every constraint satisfies a . c + |B a| <= b + tol.
bool ellipsoid_in_polytope(const Ellipsoid& e, const HPolytope& p, double tol);
/// min over constraints of b - h_E(a); negative means E sticks out.
double containment_margin(const Ellipsoid& e, const HPolytope& p);

HPolytope transform_polytope(const AffineMap& t, const HPolytope& p);
Ellipsoid transform_ellipsoid(const AffineMap& t, const Ellipsoid& e);

/// Concatenation of constraint lists, provenance preserved.
HPolytope intersect(const HPolytope& p, const HPolytope& q);
HPolytope intersect_all(const std::vector<const HPolytope*>& parts);

/// Shape-Frobenius plus center distance, scaled by max(1, largest semi-axis
/// of a).
double ellipsoid_distance(const Ellipsoid& a, const Ellipsoid& b);

/// Half-space {x : x_d <= level}.
HalfSpace height_cap(std::size_t dim, double level);

void require_same_dim(std::size_t a, std::size_t b, const char* where);

}  // namespace qhelly
