#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qhelly/geometry.hpp"
#include "qhelly/selection.hpp"

namespace qhelly {

enum class GeneratorKind { CommonBall, TangentHalfspaces, NestedBoxes, Adversarial };

std::string to_string(GeneratorKind kind);
/// Throws InputError for unknown names.
GeneratorKind generator_kind_from_string(const std::string& name);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::CommonBall;
  std::uint64_t seed = 0;
  std::size_t dimension = 2;
  /// 0 picks d(d+3)/2.
  std::size_t class_count = 0;
  std::size_t members_per_class = 1;
  double target_volume = 1.0;
  /// Facets per body for the random kinds; 0 picks 2d+2.
  std::size_t facets = 0;
  /// Offsets of common-ball facets lie in [rho, rho (1 + slack)].
  double slack = 0.5;
  /// Adversarial: selection size whose hypothesis must fail (0 picks 2d)
  /// and the half-width of the box body centers are drawn from.
  std::size_t hypothesis_k = 0;
  double spread = 1.5;
  std::size_t max_attempts = 200;

  std::size_t resolved_class_count() const;
};

/// dimension, target volume, and the raw bodies as listed in the file.
struct Instance {
  std::size_t dimension = 0;
  double target_volume = 1.0;
  std::vector<std::vector<HPolytope>> classes;
  std::optional<GeneratorSpec> generator;

  ColorClasses color_classes(bool validate = true) const;
};

/// Parses the JSON instance format; every failure is an InputError whose
/// message names the offending element path, e.g. classes[0][1][2].b.
Instance parse_instance_text(const std::string& text);
Instance parse_instance(const std::filesystem::path& path);

/// Full-precision JSON; parse_instance_text(emit_instance(x)) reproduces x.
std::string emit_instance(const Instance& instance);
void write_instance(const Instance& instance, const std::filesystem::path& path);

/// Deterministic: equal GeneratorSpec values (seed included) give identical instances.
Instance generate(const GeneratorSpec& spec);

/// count single half-spaces tangent to the ball of the given radius about
/// the origin, random unit normals, redrawn until the intersection is
/// bounded.
std::vector<HPolytope> tangent_halfspace_family(std::size_t dim, std::size_t count, std::uint64_t seed,
                                                double radius = 1.0);

}  // namespace qhelly
