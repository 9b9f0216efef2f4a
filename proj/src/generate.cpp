#include <random>

#include "qhelly/helly.hpp"
#include "qhelly/instance.hpp"
#include "qhelly/lp.hpp"

namespace qhelly {

namespace {

Vector random_unit(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> gauss;
  Vector v(static_cast<Eigen::Index>(dim));
  do {
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = gauss(rng);
  } while (v.norm() < 1e-6);
  return v.normalized();
}

// Random polytope whose facets all stay at distance in [rho, rho (1 +
// slack)] from center, so it contains the ball of radius rho there.
HPolytope ball_body(std::mt19937_64& rng, const Vector& center, double rho, std::size_t facets, double slack,
                    std::size_t max_attempts) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const auto dim = static_cast<std::size_t>(center.size());
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<HalfSpace> hs;
    for (std::size_t f = 0; f < facets; ++f) {
      const Vector a = random_unit(rng, dim);
      const double u = unif(rng);
      hs.emplace_back(a, a.dot(center) + rho * (1.0 + slack * u * u));
    }
    HPolytope p(dim, std::move(hs));
    if (is_bounded(p)) return p;
  }
  throw Error(ErrorKind::InvalidArgument, "could not draw a bounded body within the retry budget");
}

void check_spec(const GeneratorSpec& spec) {
  if (spec.dimension == 0) throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
  if (spec.members_per_class == 0) throw Error(ErrorKind::InvalidArgument, "members per class must be positive");
  if (!(spec.target_volume > 0.0)) throw Error(ErrorKind::InvalidArgument, "target volume must be positive");
  if (!(spec.slack >= 0.0)) throw Error(ErrorKind::InvalidArgument, "slack must be nonnegative");
  if (!(spec.spread >= 0.0)) throw Error(ErrorKind::InvalidArgument, "spread must be nonnegative");
  if (spec.max_attempts == 0) throw Error(ErrorKind::InvalidArgument, "max attempts must be positive");
  if (spec.facets != 0 && spec.facets < spec.dimension + 1) {
    throw Error(ErrorKind::InvalidArgument, "a bounded body needs at least d+1 facets");
  }
}

}  // namespace

Instance generate(const GeneratorSpec& spec) {
  check_spec(spec);
  const std::size_t d = spec.dimension;
  const std::size_t n = spec.resolved_class_count();
  const std::size_t facets = spec.facets ? spec.facets : 2 * d + 2;
  const double rho = ball_radius_for_volume(d, spec.target_volume);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Instance inst;
  inst.dimension = d;
  inst.target_volume = spec.target_volume;
  inst.generator = spec;
  inst.generator->class_count = n;
  const Vector origin = Vector::Zero(static_cast<Eigen::Index>(d));

  auto fill = [&](auto&& body) {
    inst.classes.assign(n, {});
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t m = 0; m < spec.members_per_class; ++m) inst.classes[i].push_back(body(i, m));
  };

  switch (spec.kind) {
    case GeneratorKind::CommonBall:
      fill([&](std::size_t, std::size_t) { return ball_body(rng, origin, rho, facets, spec.slack, spec.max_attempts); });
      break;
    case GeneratorKind::TangentHalfspaces:
      fill([&](std::size_t, std::size_t) { return ball_body(rng, origin, rho, facets, 0.0, spec.max_attempts); });
      break;
    case GeneratorKind::NestedBoxes:
      // Member 0 of class i is [-s_i, s_i]^d with s_i decreasing in i; the
      // other members are strictly larger, so each class intersection is
      // its member 0.
      fill([&](std::size_t i, std::size_t m) {
        double s = rho * 1.25 * (1.0 + 0.25 * static_cast<double>(n - 1 - i));
        if (m > 0) s *= 1.0 + 0.2 * (0.1 + unif(rng));
        return HPolytope::cube(d, s);
      });
      break;
    case GeneratorKind::Adversarial: {
      const std::size_t k = std::min(spec.hypothesis_k ? spec.hypothesis_k : 2 * d, n);
      for (std::size_t attempt = 0; attempt < spec.max_attempts; ++attempt) {
        fill([&](std::size_t, std::size_t) {
          Vector center(static_cast<Eigen::Index>(d));
          for (Eigen::Index q = 0; q < center.size(); ++q) center(q) = spec.spread * rho * (2.0 * unif(rng) - 1.0);
          return ball_body(rng, center, rho, facets, spec.slack, spec.max_attempts);
        });
        if (!verify_colorful_hypothesis(inst.color_classes(false), k, spec.target_volume).passed) return inst;
      }
      throw Error(ErrorKind::InvalidArgument, "adversarial generation exhausted its retry budget");
    }
  }
  return inst;
}

std::vector<HPolytope> tangent_halfspace_family(std::size_t dim, std::size_t count, std::uint64_t seed,
                                                double radius) {
  if (count < dim + 1) throw Error(ErrorKind::InvalidArgument, "a bounded family needs at least d+1 half-spaces");
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<HalfSpace> hs;
    for (std::size_t i = 0; i < count; ++i) hs.emplace_back(random_unit(rng, dim), radius);
    if (!is_bounded(HPolytope(dim, hs))) continue;
    std::vector<HPolytope> family;
    for (auto& h : hs) family.emplace_back(dim, std::vector<HalfSpace>{h});
    return family;
  }
  throw Error(ErrorKind::InvalidArgument, "could not draw a bounded tangent family");
}

}  // namespace qhelly
