#include "qhelly/john.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "qhelly/nnls.hpp"

namespace qhelly {

double JohnDecomposition::weight_sum() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

JohnPosition normalize_to_john_position(const HPolytope& p, const SolverSettings& settings) {
  SolveOutcome outer = mvie(p, settings);
  const Matrix inv = outer.ellipsoid.shape().inverse();
  AffineMap map(inv, -(inv * outer.ellipsoid.center()));
  const Ellipsoid image = transform_ellipsoid(map, outer.ellipsoid);
  if (ellipsoid_distance(image, Ellipsoid::ball(p.dim())) > 1e-7) {
    throw Error(ErrorKind::NormalizationFailed, "image of the MVIE is not the unit ball");
  }
  HPolytope normalized = transform_polytope(map, p);
  return {std::move(map), std::move(normalized), std::move(outer)};
}

std::vector<Contact> contact_points(const HPolytope& normalized, const SolverSettings& settings, double john_tol) {
  const SolveOutcome inner = mvie(normalized, settings);
  const double dist = ellipsoid_distance(inner.ellipsoid, Ellipsoid::ball(normalized.dim()));
  if (dist > john_tol) {
    std::ostringstream msg;
    msg << "MVIE is " << dist << " away from the unit ball";
    throw Error(ErrorKind::NotInJohnPosition, msg.str());
  }
  std::vector<Contact> contacts;
  for (std::size_t i = 0; i < normalized.size(); ++i) {
    const HalfSpace& h = normalized[i];
    // The unit ball meets {a.x <= b} at a itself when |a| = 1 and b = 1.
    if (h.offset() - 1.0 <= kActiveSlack) contacts.push_back({h.normal(), i, h.provenance()});
  }
  return contacts;
}

JohnDecomposition john_decomposition(const std::vector<Vector>& contacts) {
  if (contacts.empty()) throw Error(ErrorKind::DecompositionInfeasible, "no contact points");
  const auto d = contacts.front().size();
  const auto m = static_cast<Eigen::Index>(contacts.size());
  if (contacts.size() < static_cast<std::size_t>(d) + 1) {
    throw Error(ErrorKind::DecompositionInfeasible, "fewer than d+1 contact points");
  }
  std::vector<Vector> unit;
  unit.reserve(contacts.size());
  for (const auto& u : contacts) {
    if (u.size() != d) throw Error(ErrorKind::DimensionMismatch, "contact points differ in dimension");
    if (std::abs(u.norm() - 1.0) > 1e-8) throw Error(ErrorKind::InvalidArgument, "contact point is not a unit vector");
    unit.push_back(u / u.norm());
  }

  // Rows: balance (d), then upper-triangle of u u^T with off-diagonals
  // weighted by sqrt 2 so the residual norm equals the Frobenius norm.
  const Eigen::Index rows = d + d * (d + 1) / 2;
  Matrix a(rows, m);
  Vector rhs = Vector::Zero(rows);
  for (Eigen::Index j = 0; j < m; ++j) {
    const Vector& u = unit[static_cast<std::size_t>(j)];
    a.col(j).head(d) = u;
    Eigen::Index r = d;
    for (Eigen::Index p = 0; p < d; ++p) {
      for (Eigen::Index q = p; q < d; ++q, ++r) {
        a(r, j) = (p == q ? 1.0 : std::sqrt(2.0)) * u(p) * u(q);
        if (j == 0 && p == q) rhs(r) = 1.0;
      }
    }
  }
  const NnlsResult sol = nnls(a, rhs);

  JohnDecomposition out;
  Vector balance = Vector::Zero(d);
  Matrix frame = Matrix::Zero(d, d);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double w = sol.x(j);
    if (w <= kZeroWeight) continue;
    const Vector& u = unit[static_cast<std::size_t>(j)];
    out.contact_points.push_back(u);
    out.weights.push_back(w);
    out.source_indices.push_back(static_cast<std::size_t>(j));
    balance += w * u;
    frame += w * u * u.transpose();
  }
  out.support_size = out.weights.size();
  out.residual_balance = balance.norm();
  out.residual_identity = (frame - Matrix::Identity(d, d)).norm();

  if (out.residual_balance > kDecompositionTol || out.residual_identity > kDecompositionTol) {
    std::ostringstream msg;
    msg << "residuals balance=" << out.residual_balance << " identity=" << out.residual_identity;
    throw Error(ErrorKind::DecompositionInfeasible, msg.str());
  }
  const auto dim = static_cast<std::size_t>(d);
  if (out.support_size < dim + 1 || out.support_size > john_support_bound(dim)) {
    std::ostringstream msg;
    msg << "support size " << out.support_size << " outside [" << dim + 1 << ", " << john_support_bound(dim) << "]";
    throw Error(ErrorKind::SupportOutOfRange, msg.str());
  }
  return out;
}

CriticalCertificate critical_subfamily(const std::vector<HPolytope>& family, const SolverSettings& settings) {
  if (family.empty()) throw Error(ErrorKind::InvalidArgument, "critical_subfamily of an empty family");
  std::vector<HPolytope> tagged;
  tagged.reserve(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) tagged.push_back(family[i].tagged({0, i}));
  std::vector<const HPolytope*> parts;
  for (const auto& t : tagged) parts.push_back(&t);
  const HPolytope whole = intersect_all(parts);

  JohnPosition john = normalize_to_john_position(whole, settings);
  const std::vector<Contact> contacts = contact_points(john.polytope, settings);
  std::vector<Vector> points;
  points.reserve(contacts.size());
  for (const auto& c : contacts) points.push_back(c.point);
  JohnDecomposition decomposition = john_decomposition(points);

  std::set<std::size_t> members;
  for (std::size_t k : decomposition.source_indices) members.insert(contacts[k].provenance->member_index);
  std::vector<std::size_t> selected(members.begin(), members.end());

  std::vector<const HPolytope*> chosen;
  for (std::size_t i : selected) chosen.push_back(&family[i]);
  const SolveOutcome sub = mvie(intersect_all(chosen), settings);
  const double gap = std::abs(sub.objective - john.mvie.objective) / john.mvie.objective;
  if (gap > kCriticalVolumeTol) {
    std::ostringstream msg;
    msg << "subfamily MVIE volume differs by " << gap << " (relative)";
    throw Error(ErrorKind::CertificateFailed, msg.str());
  }
  return {std::move(selected), std::move(decomposition), gap, john.mvie.ellipsoid, sub.ellipsoid, john.map};
}

std::optional<Ellipsoid> inscribed_ball_in_ellipsoid(const Ellipsoid& e, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "ball radius must be positive");
  if (min_semiaxis(e) < radius) return std::nullopt;
  return Ellipsoid::ball(e.center(), radius);
}

}  // namespace qhelly
