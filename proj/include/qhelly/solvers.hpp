#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qhelly/geometry.hpp"

namespace qhelly {

struct SolverSettings {
  double feasibility_tol = 1e-9;
  double kkt_tol = 1e-7;
  int max_iterations = 200;  // Newton steps per centering phase
  double barrier_decrease = 0.2;
  /// Re-solve mvie(P cap H_tau) after every lowest-ellipsoid solve and
  /// fail if it disagrees by more than crosscheck_tol.
  bool crosscheck_lowest = true;
  double crosscheck_tol = 1e-5;

  void validate() const;
};

/// Slack threshold below which a constraint counts as touching.
inline constexpr double kActiveSlack = 1e-6;

struct SolveOutcome {
  Ellipsoid ellipsoid;
  /// Volume for mvie, height for lowest_ellipsoid.
  double objective = 0.0;
  /// Duality-gap bound nu / t of the final barrier iterate.
  double kkt_residual = 0.0;
  std::vector<std::size_t> active_constraints;
  int newton_steps = 0;
  /// Distance to mvie(P cap H_tau); lowest_ellipsoid only.
  std::optional<double> crosscheck_distance;
};

/// Maximum-volume ellipsoid inscribed in a bounded polytope with interior.
SolveOutcome mvie(const HPolytope& p, const SolverSettings& settings = {});

/// Among ellipsoids of volume >= target_volume inside P, the one of least
/// height (largest x_d coordinate).
SolveOutcome lowest_ellipsoid(const HPolytope& p, double target_volume, const SolverSettings& settings = {});

/// Exact area of a bounded planar polytope (0 when empty).
double polytope_volume_2d(const HPolytope& p);

/// Indices with b - a.c - |B a| <= threshold.
std::vector<std::size_t> active_set(const Ellipsoid& e, const HPolytope& p, double threshold = kActiveSlack);

}  // namespace qhelly
