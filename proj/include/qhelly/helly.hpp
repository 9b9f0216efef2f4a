#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qhelly/geometry.hpp"
#include "qhelly/john.hpp"
#include "qhelly/parallel.hpp"
#include "qhelly/selection.hpp"
#include "qhelly/solvers.hpp"

namespace qhelly {

/// {t : L + t inside P}: every offset b shrinks by the support h_L(a).
HPolytope minkowski_difference(const HPolytope& p, const Ellipsoid& l);
/// Polytope L: one support LP per constraint; throws Unbounded when L is.
HPolytope minkowski_difference(const HPolytope& p, const HPolytope& l);

std::optional<Vector> contains_translate(const HPolytope& p, const Ellipsoid& l, double tol = 1e-9);
std::optional<Vector> contains_translate(const HPolytope& p, const HPolytope& l, double tol = 1e-9);

/// Relative slack allowed when comparing an MVIE volume to a target.
inline constexpr double kVolumeRelTol = 1e-6;
/// Two lowest ellipsoids count as equal within this ellipsoid_distance.
inline constexpr double kStep3Tol = 1e-5;
/// Tolerance of the final witness containment recheck.
inline constexpr double kWitnessTol = 1e-6;
/// Allowed gap between mvie(M) and the unit ball in the normalized frame.
inline constexpr double kNormalizationTol = 1e-5;

struct HypothesisReport {
  bool passed = true;
  std::size_t k = 0;
  double target_volume = 0.0;
  std::size_t selections_checked = 0;
  /// Smallest MVIE volume met; an intersection without interior counts 0.
  double min_volume = 0.0;
  std::optional<ColorfulSelection> min_selection;
  std::optional<ColorfulSelection> first_failure;
  double first_failure_volume = 0.0;
};

/// Checks that every colorful selection of k bodies contains an ellipsoid
/// of volume target_volume (up to kVolumeRelTol).
HypothesisReport verify_colorful_hypothesis(const ColorClasses& classes, std::size_t k, double target_volume,
                                            const SolverSettings& settings = {}, const ExecutionOptions& exec = {});

struct TranslateWitness {
  std::size_t class_index = 0;
  Vector translate;
};

/// First class (in order) whose full intersection contains a translate of
/// L. Expects d+1 classes. With check_hypothesis, first confirms that every
/// colorful (d+1)-selection contains a translate and throws
/// HypothesisViolated otherwise.
TranslateWitness colorful_helly_witness(const ColorClasses& classes, const Ellipsoid& l,
                                        bool check_hypothesis = false, const ExecutionOptions& exec = {});

struct SelectionValue {
  ColorfulSelection selection;
  double value = 0.0;
};

struct Step3Gap {
  std::size_t class_index = 0;
  /// ellipsoid_distance to E_max; infinite when the solve failed.
  double gap = 0.0;
  std::string note;
};

struct PipelineReport {
  std::string pipeline;
  std::size_t dim = 0;
  double target_volume = 0.0;
  std::optional<HypothesisReport> hypothesis;

  std::optional<std::size_t> witness_class;
  std::optional<Ellipsoid> witness_ellipsoid;
  double witness_volume = 0.0;
  /// b - h_E(a) minimum for each member of the witness class.
  std::vector<double> witness_margins;
  std::optional<AffineMap> normalization;

  /// Highest lowest ellipsoid and the selection that defines it.
  std::optional<ColorfulSelection> extremal_selection;
  std::optional<Ellipsoid> extremal_ellipsoid;
  double extremal_height = 0.0;
  /// Lowest-ellipsoid height of every evaluated selection.
  std::vector<SelectionValue> selection_heights;

  std::vector<Step3Gap> step3_gaps;
  std::optional<std::size_t> step3_class;

  /// Defining classes first, then the remaining ones.
  std::vector<std::size_t> class_order;
  std::optional<double> normalization_gap;
  std::optional<double> radius;
  std::vector<SelectionValue> selection_min_semiaxes;
  std::optional<Vector> translate;

  std::optional<CriticalCertificate> critical;
  std::vector<Pick> critical_members;

  double wall_time_seconds = 0.0;
};

struct PipelineOptions {
  SolverSettings settings;
  ExecutionOptions exec;
  bool skip_hypothesis_check = false;
};

/// Every body of every class flattened into one family, then reduced to a
/// critical subfamily with the same MVIE.
PipelineReport ell_pipeline(const ColorClasses& classes, const PipelineOptions& options = {});

/// Needs d(d+3)/2 classes. The witness is E_max, the highest of the lowest
/// ellipsoids over all full colorful selections.
PipelineReport colell_pipeline(const ColorClasses& classes, double target_volume, const PipelineOptions& options = {});

/// Needs 3d classes; hypothesis on colorful 2d-selections.
PipelineReport theorem1_pipeline(const ColorClasses& classes, double target_volume,
                                 const PipelineOptions& options = {});

/// Needs d(d+3)/2 classes; hypothesis on colorful 2d-selections at
/// target_volume, then colell at the least full-selection MVIE volume.
PipelineReport saxuso_scenario(const ColorClasses& classes, double target_volume = 1.0,
                               const PipelineOptions& options = {});

/// Height first, then center entries, then shape entries row-major.
bool higher_than(const Ellipsoid& a, const Ellipsoid& b);

}  // namespace qhelly
