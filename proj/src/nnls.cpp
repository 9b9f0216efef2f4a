#include "qhelly/nnls.hpp"

#include <algorithm>
#include <vector>

namespace qhelly {

namespace {

// Least squares restricted to the passive columns; other entries are zero.
Vector passive_solve(const Matrix& a, const Vector& b, const std::vector<bool>& passive) {
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    if (passive[static_cast<std::size_t>(j)]) cols.push_back(j);
  Vector z = Vector::Zero(a.cols());
  if (cols.empty()) return z;
  Matrix sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(cols[k]);
  const Vector s = sub.colPivHouseholderQr().solve(b);
  for (std::size_t k = 0; k < cols.size(); ++k) z(cols[k]) = s(static_cast<Eigen::Index>(k));
  return z;
}

}  // namespace

NnlsResult nnls(const Matrix& a, const Vector& b, int max_iterations) {
  if (a.rows() != b.size()) throw Error(ErrorKind::DimensionMismatch, "nnls: rows of A and b differ");
  const Eigen::Index n = a.cols();
  if (max_iterations <= 0) max_iterations = static_cast<int>(3 * n + 30);

  const double tol = 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff()) * std::max(1.0, b.norm());
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  std::vector<bool> blocked(static_cast<std::size_t>(n), false);
  Vector x = Vector::Zero(n);

  NnlsResult result;
  while (result.iterations < max_iterations) {
    const Vector w = a.transpose() * (b - a * x);
    Eigen::Index enter = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      if (passive[ju] || blocked[ju]) continue;
      if (w(j) > best) {
        best = w(j);
        enter = j;
      }
    }
    if (enter < 0) break;
    ++result.iterations;
    passive[static_cast<std::size_t>(enter)] = true;

    bool rejected = false;
    for (bool first = true;; first = false) {
      Vector z = passive_solve(a, b, passive);
      if (first && z(enter) <= 0.0) {
        // Roundoff made the entering column look useful; keep it out.
        passive[static_cast<std::size_t>(enter)] = false;
        blocked[static_cast<std::size_t>(enter)] = true;
        rejected = true;
        break;
      }
      bool all_positive = true;
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (!passive[static_cast<std::size_t>(j)] || z(j) > 0.0) continue;
        all_positive = false;
        alpha = std::min(alpha, x(j) / (x(j) - z(j)));
      }
      if (all_positive) {
        x = z;
        break;
      }
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && x(j) <= tol) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0.0;
        }
      }
    }
    if (!rejected) std::fill(blocked.begin(), blocked.end(), false);
  }
  result.x = x;
  result.residual_norm = (a * x - b).norm();
  return result;
}

}  // namespace qhelly
