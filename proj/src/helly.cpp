#include "qhelly/helly.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "qhelly/lp.hpp"

namespace qhelly {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Values in selection order; the lowest failing index is rethrown with the
// selection named in the message.
template <class R>
std::vector<R> collect_attributed(std::vector<Evaluated<R>> slots, const std::vector<ColorfulSelection>& sels) {
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i].error) continue;
    try {
      std::rethrow_exception(slots[i].error);
    } catch (const Error& e) {
      throw Error(e.kind(), "selection " + to_string(sels[i]) + ": " + e.detail());
    }
  }
  return collect(std::move(slots));
}

std::size_t highest_index(const std::vector<Ellipsoid>& ellipsoids) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < ellipsoids.size(); ++i)
    if (higher_than(ellipsoids[i], ellipsoids[best])) best = i;
  return best;
}

HPolytope class_intersection(const ColorClasses& classes, std::size_t j) {
  std::vector<const HPolytope*> parts;
  for (const auto& m : classes.members(j)) parts.push_back(&m);
  return intersect_all(parts);
}

// Containment margins of e in every member of class j; throws when any is
// below -kWitnessTol.
std::vector<double> recheck_witness(const Ellipsoid& e, const ColorClasses& classes, std::size_t j) {
  std::vector<double> margins;
  for (std::size_t m = 0; m < classes.class_size(j); ++m) {
    const double margin = containment_margin(e, classes.member(j, m));
    margins.push_back(margin);
    if (margin < -kWitnessTol) {
      std::ostringstream msg;
      msg << "witness sticks out of class " << j << " member " << m << " by " << -margin;
      throw Error(ErrorKind::WitnessContainmentFailed, msg.str());
    }
  }
  return margins;
}

void require_class_count(const ColorClasses& classes, std::size_t expected, const char* pipeline) {
  if (classes.size() != expected) {
    std::ostringstream msg;
    msg << pipeline << " needs " << expected << " classes in dimension " << classes.dim() << ", got "
        << classes.size();
    throw Error(ErrorKind::InvalidArgument, msg.str());
  }
}

HypothesisReport checked_hypothesis(const ColorClasses& classes, std::size_t k, double target,
                                    const PipelineOptions& options) {
  HypothesisReport h = verify_colorful_hypothesis(classes, k, target, options.settings, options.exec);
  if (!h.passed) {
    std::ostringstream msg;
    msg << "selection " << to_string(*h.first_failure) << " has MVIE volume " << h.first_failure_volume
        << " below target " << target;
    throw Error(ErrorKind::HypothesisViolated, msg.str());
  }
  return h;
}

// Orthogonal map sending the unit vector u to e_d (a Householder
// reflection, or the identity when u already is e_d).
Matrix align_with_last_axis(const Vector& u) {
  const auto d = u.size();
  Vector v = u - Vector::Unit(d, d - 1);
  const double vv = v.squaredNorm();
  if (vv < 1e-30) return Matrix::Identity(d, d);
  return Matrix::Identity(d, d) - (2.0 / vv) * v * v.transpose();
}

}  // namespace

HPolytope minkowski_difference(const HPolytope& p, const Ellipsoid& l) {
  require_same_dim(p.dim(), l.dim(), "minkowski_difference");
  std::vector<HalfSpace> out;
  out.reserve(p.size());
  for (const auto& h : p.halfspaces())
    out.emplace_back(h.normal(), h.offset() - support_value(l, h.normal()), h.provenance());
  return HPolytope(p.dim(), std::move(out));
}

HPolytope minkowski_difference(const HPolytope& p, const HPolytope& l) {
  require_same_dim(p.dim(), l.dim(), "minkowski_difference");
  std::vector<HalfSpace> out;
  out.reserve(p.size());
  for (const auto& h : p.halfspaces()) {
    const auto support = polytope_support(l, h.normal());
    if (!support) throw Error(ErrorKind::Unbounded, "subtracted polytope is unbounded");
    out.emplace_back(h.normal(), h.offset() - *support, h.provenance());
  }
  return HPolytope(p.dim(), std::move(out));
}

std::optional<Vector> contains_translate(const HPolytope& p, const Ellipsoid& l, double tol) {
  return lp_feasible(minkowski_difference(p, l), tol);
}

std::optional<Vector> contains_translate(const HPolytope& p, const HPolytope& l, double tol) {
  return lp_feasible(minkowski_difference(p, l), tol);
}

bool higher_than(const Ellipsoid& a, const Ellipsoid& b) {
  const double ha = ellipsoid_height(a), hb = ellipsoid_height(b);
  if (ha != hb) return ha > hb;
  for (Eigen::Index i = 0; i < a.center().size(); ++i)
    if (a.center()(i) != b.center()(i)) return a.center()(i) > b.center()(i);
  for (Eigen::Index r = 0; r < a.shape().rows(); ++r)
    for (Eigen::Index c = 0; c < a.shape().cols(); ++c)
      if (a.shape()(r, c) != b.shape()(r, c)) return a.shape()(r, c) > b.shape()(r, c);
  return false;
}

HypothesisReport verify_colorful_hypothesis(const ColorClasses& classes, std::size_t k, double target_volume,
                                            const SolverSettings& settings, const ExecutionOptions& exec) {
  if (!(target_volume > 0.0)) throw Error(ErrorKind::InvalidArgument, "target volume must be positive");
  const auto sels = colorful_selections(classes, k);
  auto volume_of = [&](const ColorfulSelection& s) {
    try {
      return mvie(s.intersection(classes), settings).objective;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::EmptyInterior) return 0.0;
      throw;
    }
  };
  const std::vector<double> volumes = collect_attributed(evaluate<double>(sels, volume_of, exec), sels);

  HypothesisReport report;
  report.k = k;
  report.target_volume = target_volume;
  report.selections_checked = sels.size();
  std::size_t argmin = 0;
  for (std::size_t i = 0; i < volumes.size(); ++i) {
    if (volumes[i] < volumes[argmin]) argmin = i;
    if (report.passed && volumes[i] < target_volume * (1.0 - kVolumeRelTol)) {
      report.passed = false;
      report.first_failure = sels[i];
      report.first_failure_volume = volumes[i];
    }
  }
  report.min_volume = volumes[argmin];
  report.min_selection = sels[argmin];
  return report;
}

TranslateWitness colorful_helly_witness(const ColorClasses& classes, const Ellipsoid& l, bool check_hypothesis,
                                        const ExecutionOptions& exec) {
  require_same_dim(classes.dim(), l.dim(), "colorful_helly_witness");
  require_class_count(classes, classes.dim() + 1, "colorful_helly_witness");
  if (check_hypothesis) {
    const auto sels = colorful_selections(classes, classes.size());
    auto holds = [&](const ColorfulSelection& s) { return contains_translate(s.intersection(classes), l).has_value(); };
    const std::vector<bool> ok = collect_attributed(evaluate<bool>(sels, holds, exec), sels);
    for (std::size_t i = 0; i < ok.size(); ++i) {
      if (!ok[i]) {
        throw Error(ErrorKind::HypothesisViolated,
                    "selection " + to_string(sels[i]) + " contains no translate of the body");
      }
    }
  }
  std::ostringstream margins;
  for (std::size_t j = 0; j < classes.size(); ++j) {
    const HPolytope whole = class_intersection(classes, j);
    if (auto t = contains_translate(whole, l)) return {j, std::move(*t)};
    margins << (j ? ", " : "") << j << ": " << chebyshev_center(minkowski_difference(whole, l)).radius;
  }
  throw Error(ErrorKind::NoWitness, "no class contains a translate; per-class margins {" + margins.str() + "}");
}

PipelineReport ell_pipeline(const ColorClasses& classes, const PipelineOptions& options) {
  const auto start = Clock::now();
  std::vector<HPolytope> family;
  std::vector<Pick> origin;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    for (std::size_t j = 0; j < classes.class_size(i); ++j) {
      family.push_back(classes.member(i, j));
      origin.push_back({i, j});
    }
  }
  CriticalCertificate cert = critical_subfamily(family, options.settings);

  PipelineReport report;
  report.pipeline = "ell";
  report.dim = classes.dim();
  for (std::size_t idx : cert.selected_indices) report.critical_members.push_back(origin[idx]);
  report.witness_ellipsoid = cert.global_mvie;
  report.witness_volume = ellipsoid_volume(cert.global_mvie);
  report.normalization = cert.normalization;
  report.critical = std::move(cert);
  report.wall_time_seconds = seconds_since(start);
  return report;
}

PipelineReport colell_pipeline(const ColorClasses& classes, double target_volume, const PipelineOptions& options) {
  const auto start = Clock::now();
  const std::size_t d = classes.dim();
  const std::size_t n = john_support_bound(d);
  require_class_count(classes, n, "colell");

  PipelineReport report;
  report.pipeline = "colell";
  report.dim = d;
  report.target_volume = target_volume;
  if (!options.skip_hypothesis_check) report.hypothesis = checked_hypothesis(classes, n, target_volume, options);

  const auto sels = colorful_selections(classes, n);
  auto lowest_of = [&](const ColorfulSelection& s) {
    return lowest_ellipsoid(s.intersection(classes), target_volume, options.settings).ellipsoid;
  };
  const std::vector<Ellipsoid> lows = collect_attributed(evaluate<Ellipsoid>(sels, lowest_of, options.exec), sels);
  for (std::size_t i = 0; i < sels.size(); ++i) report.selection_heights.push_back({sels[i], ellipsoid_height(lows[i])});

  const std::size_t best = highest_index(lows);
  const Ellipsoid& e_max = lows[best];
  const ColorfulSelection& defining = sels[best];
  report.extremal_selection = defining;
  report.extremal_ellipsoid = e_max;
  report.extremal_height = ellipsoid_height(e_max);

  // Dropping one body at a time: the first K_j whose lowest ellipsoid is
  // still E_max supplies the witness class.
  for (std::size_t pos = 0; pos < defining.picks.size(); ++pos) {
    Step3Gap g{defining.picks[pos].class_index, std::numeric_limits<double>::infinity(), ""};
    try {
      const HPolytope k_j = defining.without(pos).intersection(classes);
      g.gap = ellipsoid_distance(lowest_ellipsoid(k_j, target_volume, options.settings).ellipsoid, e_max);
    } catch (const Error& e) {
      g.note = e.what();
    }
    if (!report.step3_class && g.gap <= kStep3Tol) report.step3_class = g.class_index;
    report.step3_gaps.push_back(std::move(g));
  }
  if (!report.step3_class) {
    std::ostringstream msg;
    msg << "no class passes; gaps {";
    for (std::size_t i = 0; i < report.step3_gaps.size(); ++i)
      msg << (i ? ", " : "") << report.step3_gaps[i].class_index << ": " << report.step3_gaps[i].gap;
    msg << "}";
    throw Error(ErrorKind::Step3Failed, msg.str());
  }

  const std::size_t j = *report.step3_class;
  report.witness_margins = recheck_witness(e_max, classes, j);
  report.witness_class = j;
  report.witness_ellipsoid = e_max;
  report.witness_volume = ellipsoid_volume(e_max);
  if (report.witness_volume < target_volume * (1.0 - kVolumeRelTol)) {
    throw Error(ErrorKind::CertificateFailed, "witness volume below target");
  }
  report.wall_time_seconds = seconds_since(start);
  return report;
}

PipelineReport theorem1_pipeline(const ColorClasses& classes, double target_volume, const PipelineOptions& options) {
  const auto start = Clock::now();
  const std::size_t d = classes.dim();
  require_class_count(classes, 3 * d, "theorem1");

  PipelineReport report;
  report.pipeline = "theorem1";
  report.dim = d;
  report.target_volume = target_volume;
  if (!options.skip_hypothesis_check) report.hypothesis = checked_hypothesis(classes, 2 * d, target_volume, options);

  // Step 1: highest lowest ellipsoid over colorful (2d-1)-selections.
  const auto sels = colorful_selections(classes, 2 * d - 1);
  auto lowest_of = [&](const ColorfulSelection& s) {
    return lowest_ellipsoid(s.intersection(classes), target_volume, options.settings).ellipsoid;
  };
  const std::vector<Ellipsoid> lows = collect_attributed(evaluate<Ellipsoid>(sels, lowest_of, options.exec), sels);
  for (std::size_t i = 0; i < sels.size(); ++i) report.selection_heights.push_back({sels[i], ellipsoid_height(lows[i])});
  const std::size_t best = highest_index(lows);
  const Ellipsoid& e_star = lows[best];
  const ColorfulSelection& defining = sels[best];
  report.extremal_selection = defining;
  report.extremal_ellipsoid = e_star;
  report.extremal_height = ellipsoid_height(e_star);

  std::vector<std::size_t> remaining;
  for (const Pick& p : defining.picks) report.class_order.push_back(p.class_index);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (std::none_of(defining.picks.begin(), defining.picks.end(), [c](const Pick& p) { return p.class_index == c; }))
      remaining.push_back(c);
  }
  report.class_order.insert(report.class_order.end(), remaining.begin(), remaining.end());

  // Step 2: T(x) = Q B*^-1 (x - c*) sends E* to the unit ball; the rotation
  // Q keeps e_d fixed in the sense that the cap {x_d <= height(E*)} lands
  // on {y_d <= 1}.
  const Vector u = e_star.shape().col(static_cast<Eigen::Index>(d - 1)).normalized();
  const Matrix linear = align_with_last_axis(u) * e_star.shape().inverse();
  const AffineMap t(linear, -(linear * e_star.center()));
  report.normalization = t;

  // Step 3: M = T(C_1 cap ... cap C_{2d-1}) cap H_1 has the unit ball as MVIE.
  const HPolytope m = transform_polytope(t, defining.intersection(classes)).with(height_cap(d, 1.0));
  const double gap = ellipsoid_distance(mvie(m, options.settings).ellipsoid, Ellipsoid::ball(d));
  report.normalization_gap = gap;
  if (gap > kNormalizationTol) {
    std::ostringstream msg;
    msg << "MVIE of the capped intersection is " << gap << " away from the unit ball";
    throw Error(ErrorKind::NormalizationFailed, msg.str());
  }

  // Step 4: smallest semi-axis over the remaining colorful selections.
  std::vector<std::vector<HPolytope>> images;
  for (std::size_t c : remaining) {
    std::vector<HPolytope> members;
    for (const auto& body : classes.members(c)) members.push_back(transform_polytope(t, body));
    images.push_back(std::move(members));
  }
  const ColorClasses rest(d, std::move(images), false);
  const auto rest_sels = colorful_selections(rest, rest.size());
  auto semiaxis_of = [&](const ColorfulSelection& s) {
    try {
      return min_semiaxis(mvie(intersect(s.intersection(rest), m), options.settings).ellipsoid);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::EmptyInterior) return 0.0;
      throw;
    }
  };
  const std::vector<double> semis = collect_attributed(evaluate<double>(rest_sels, semiaxis_of, options.exec), rest_sels);
  std::size_t smallest = 0;
  for (std::size_t i = 0; i < rest_sels.size(); ++i) {
    ColorfulSelection original;
    for (const Pick& p : rest_sels[i].picks) original.picks.push_back({remaining[p.class_index], p.member_index});
    report.selection_min_semiaxes.push_back({std::move(original), semis[i]});
    if (semis[i] < semis[smallest]) smallest = i;
  }
  const double r = semis[smallest];
  report.radius = r;
  if (!(r > 0.0)) {
    throw Error(ErrorKind::NoWitness, "selection " + to_string(report.selection_min_semiaxes[smallest].selection) +
                                          " meets the capped intersection without interior; r = 0");
  }

  // Step 5: colored Helly for translates of r B^d among the remaining classes.
  TranslateWitness w{0, Vector()};
  try {
    w = colorful_helly_witness(rest, Ellipsoid::ball(d, r), false, options.exec);
  } catch (const Error& e) {
    std::ostringstream msg;
    msg << "r = " << r << "; " << e.detail();
    throw Error(e.kind(), msg.str());
  }
  const std::size_t j = remaining[w.class_index];

  // Step 6: back to the input frame.
  const AffineMap back = t.inverse();
  const Ellipsoid witness = Ellipsoid::from_factor(r * back.linear(), back.apply(w.translate));
  const double expected_volume = std::pow(r, static_cast<double>(d)) * std::abs(back.determinant()) * unit_ball_volume(d);
  const double volume = ellipsoid_volume(witness);
  if (std::abs(volume - expected_volume) > 1e-8 * expected_volume) {
    throw Error(ErrorKind::CertificateFailed, "witness volume disagrees with r^d |det T^-1| omega_d");
  }
  report.translate = w.translate;
  report.witness_margins = recheck_witness(witness, classes, j);
  report.witness_class = j;
  report.witness_ellipsoid = witness;
  report.witness_volume = volume;
  report.wall_time_seconds = seconds_since(start);
  return report;
}

PipelineReport saxuso_scenario(const ColorClasses& classes, double target_volume, const PipelineOptions& options) {
  const auto start = Clock::now();
  const std::size_t d = classes.dim();
  const std::size_t n = john_support_bound(d);
  require_class_count(classes, n, "saxuso");

  std::optional<HypothesisReport> hyp;
  if (!options.skip_hypothesis_check) hyp = checked_hypothesis(classes, 2 * d, target_volume, options);

  const auto sels = colorful_selections(classes, n);
  auto volume_of = [&](const ColorfulSelection& s) { return mvie(s.intersection(classes), options.settings).objective; };
  const std::vector<double> volumes = collect_attributed(evaluate<double>(sels, volume_of, options.exec), sels);
  const double v = *std::min_element(volumes.begin(), volumes.end());

  // v is a minimum over exactly the selections colell would check.
  PipelineOptions inner = options;
  inner.skip_hypothesis_check = true;
  PipelineReport report = colell_pipeline(classes, v, inner);
  report.pipeline = "saxuso";
  report.hypothesis = std::move(hyp);
  report.wall_time_seconds = seconds_since(start);
  return report;
}

}  // namespace qhelly
