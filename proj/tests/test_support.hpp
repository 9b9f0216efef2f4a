#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "qhelly/geometry.hpp"
#include "qhelly/lp.hpp"

namespace qhelly::testing {

inline Vector random_unit(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> g;
  Vector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = g(rng);
  return v.normalized();
}

inline Matrix random_rotation(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> g;
  Matrix a(dim, dim);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
  return Eigen::HouseholderQR<Matrix>(a).householderQ();
}

/// SPD matrix with eigenvalues in [lo, hi].
inline Matrix random_spd(std::mt19937_64& rng, std::size_t dim, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  const Matrix q = random_rotation(rng, dim);
  Vector ev(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = u(rng);
  const Matrix b = q * ev.asDiagonal() * q.transpose();
  return 0.5 * (b + b.transpose());
}

inline Ellipsoid random_ellipsoid(std::mt19937_64& rng, std::size_t dim, double lo = 0.3, double hi = 2.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector c(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = u(rng);
  return Ellipsoid(random_spd(rng, dim, lo, hi), c);
}

/// Bounded random polytope with facets at distance [1, 1 + spread] from
/// the origin.
inline HPolytope random_polytope(std::mt19937_64& rng, std::size_t dim, std::size_t facets, double spread = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    std::vector<HalfSpace> hs;
    for (std::size_t f = 0; f < facets; ++f) hs.emplace_back(random_unit(rng, dim), 1.0 + spread * u(rng));
    HPolytope p(dim, std::move(hs));
    if (is_bounded(p)) return p;
  }
}

/// Well-conditioned invertible affine map.
inline AffineMap random_affine(std::mt19937_64& rng, std::size_t dim) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Matrix l = random_rotation(rng, dim) * random_spd(rng, dim, 0.5, 2.0);
  Vector s(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = 2.0 * u(rng);
  return AffineMap(l, s);
}

inline HPolytope triangle() {
  Matrix a(3, 2);
  a << -1, 0, 0, -1, 1, 1;
  Vector b(3);
  b << 0, 0, 1;
  return HPolytope::from_matrix(a, b);
}

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline Matrix diag(std::initializer_list<double> xs) { return vec(xs).asDiagonal(); }

inline double shape_center_distance(const Ellipsoid& a, const Ellipsoid& b) {
  return (a.shape() - b.shape()).norm() + (a.center() - b.center()).norm();
}

}  // namespace qhelly::testing
