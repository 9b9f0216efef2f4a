#pragma once

#include <optional>

#include "qhelly/geometry.hpp"

namespace qhelly {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Vector x;
  double value = 0.0;
};

/// maximize objective . x subject to normals * x <= offsets, x free.
/// Dense two-phase tableau simplex; Dantzig pricing with a Bland fallback
/// once degenerate pivots stall.
LpResult solve_lp(const Matrix& normals, const Vector& offsets, const Vector& objective);

struct ChebyshevBall {
  Vector center;
  double radius = 0.0;  // may be negative: then no point is feasible
};

/// Largest r such that some x has a_i . x + r <= b_i for all i, capped at
/// radius_cap so the LP stays bounded for unbounded polytopes.
ChebyshevBall chebyshev_center(const HPolytope& p, double radius_cap = 1e6);

/// A point satisfying every constraint within tol, or nothing when the best
/// uniform slack is below -tol.
std::optional<Vector> lp_feasible(const HPolytope& p, double tol = 1e-9);

/// max over P of direction . x; nullopt when unbounded. Throws
/// EmptyInterior when P is empty.
std::optional<double> polytope_support(const HPolytope& p, const Vector& direction);

/// Every coordinate +-x_i bounded above. Empty polytopes count as bounded.
bool is_bounded(const HPolytope& p);

/// Strict feasibility: the best uniform slack exceeds tol.
bool has_interior(const HPolytope& p, double tol = 1e-9);

}  // namespace qhelly
