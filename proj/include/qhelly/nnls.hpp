#pragma once

#include "qhelly/geometry.hpp"

namespace qhelly {

struct NnlsResult {
  Vector x;
  double residual_norm = 0.0;
  int iterations = 0;
};

/// min |A x - b| subject to x >= 0, Lawson-Hanson active set. Among equally
/// attractive columns the lowest index enters first, so results are
/// deterministic for duplicated columns.
NnlsResult nnls(const Matrix& a, const Vector& b, int max_iterations = 0);

}  // namespace qhelly
