#pragma once

#include <cstddef>
#include <exception>
#include <optional>
#include <vector>

#include <omp.h>

namespace qhelly {

struct ExecutionOptions {
  /// Worker count for the parallel kernel; 0 means the OpenMP default.
  int threads = 1;
  /// Run the serial reference kernel instead of the OpenMP one.
  bool serial_reference = false;
};

/// Result slot for one work item: a value or the exception it raised.
template <class R>
struct Evaluated {
  std::optional<R> value;
  std::exception_ptr error;
};

/// Reference kernel: items evaluated in index order on the calling thread.
template <class R, class T, class F>
std::vector<Evaluated<R>> evaluate_serial(const std::vector<T>& items, F&& f) {
  std::vector<Evaluated<R>> out(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    try {
      out[i].value.emplace(f(items[i]));
    } catch (...) {
      out[i].error = std::current_exception();
    }
  }
  return out;
}

/// OpenMP kernel. Each item writes only its own pre-sized slot, so the
/// output is identical to evaluate_serial for any worker count provided f
/// is a pure function of its argument.
template <class R, class T, class F>
std::vector<Evaluated<R>> evaluate_parallel(const std::vector<T>& items, F&& f, int threads) {
  std::vector<Evaluated<R>> out(items.size());
  const auto n = static_cast<std::ptrdiff_t>(items.size());
  const int workers = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    try {
      out[u].value.emplace(f(items[u]));
    } catch (...) {
      out[u].error = std::current_exception();
    }
  }
  return out;
}

template <class R, class T, class F>
std::vector<Evaluated<R>> evaluate(const std::vector<T>& items, F&& f, const ExecutionOptions& exec) {
  if (exec.serial_reference) return evaluate_serial<R>(items, std::forward<F>(f));
  return evaluate_parallel<R>(items, std::forward<F>(f), exec.threads);
}

/// Values in item order; rethrows the error of the lowest failing index.
template <class R>
std::vector<R> collect(std::vector<Evaluated<R>> slots) {
  std::vector<R> out;
  out.reserve(slots.size());
  for (auto& s : slots) {
    if (s.error) std::rethrow_exception(s.error);
    out.push_back(std::move(*s.value));
  }
  return out;
}

}  // namespace qhelly
