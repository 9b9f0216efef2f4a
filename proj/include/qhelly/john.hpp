#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qhelly/geometry.hpp"
#include "qhelly/solvers.hpp"

namespace qhelly {

/// Weights certifying that the unit ball is the maximum-volume ellipsoid:
/// sum lambda_i u_i = 0 and sum lambda_i u_i u_i^T = I.
struct JohnDecomposition {
  std::vector<Vector> contact_points;
  std::vector<double> weights;
  /// Position of each kept point in the input sequence.
  std::vector<std::size_t> source_indices;
  double residual_balance = 0.0;
  double residual_identity = 0.0;
  std::size_t support_size = 0;

  double weight_sum() const;
};

inline constexpr double kDecompositionTol = 1e-6;
inline constexpr double kZeroWeight = 1e-9;

/// d(d+3)/2: the largest support a John decomposition ever needs.
constexpr std::size_t john_support_bound(std::size_t dim) { return dim * (dim + 3) / 2; }

struct JohnPosition {
  /// T(x) = B^-1 (x - c) for the MVIE {B u + c}.
  AffineMap map;
  HPolytope polytope;
  SolveOutcome mvie;
};

JohnPosition normalize_to_john_position(const HPolytope& p, const SolverSettings& settings = {});

struct Contact {
  Vector point;
  std::size_t constraint_index = 0;
  std::optional<Provenance> provenance;
};

/// Tangency points of the unit ball with the active constraints of a
/// polytope already in John position. Throws NotInJohnPosition when the
/// polytope's MVIE is farther than john_tol from the unit ball.
std::vector<Contact> contact_points(const HPolytope& normalized, const SolverSettings& settings = {},
                                    double john_tol = 1e-6);

JohnDecomposition john_decomposition(const std::vector<Vector>& contacts);

struct CriticalCertificate {
  std::vector<std::size_t> selected_indices;
  JohnDecomposition decomposition;
  /// |vol(mvie(selected)) - vol(mvie(all))| / vol(mvie(all)).
  double volume_gap = 0.0;
  Ellipsoid global_mvie;
  Ellipsoid subfamily_mvie;
  AffineMap normalization;
};

inline constexpr double kCriticalVolumeTol = 1e-5;

/// At most d(d+3)/2 members whose intersection has the same MVIE as the
/// whole family. Members need not be bounded individually.
CriticalCertificate critical_subfamily(const std::vector<HPolytope>& family, const SolverSettings& settings = {});

/// Ball of radius r at the ellipsoid centre when every semi-axis is >= r.
std::optional<Ellipsoid> inscribed_ball_in_ellipsoid(const Ellipsoid& e, double radius);

}  // namespace qhelly
