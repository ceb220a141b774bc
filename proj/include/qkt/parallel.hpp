#pragma once

#include "qkt/series_matrix.hpp"

namespace qkt {

/// Runs fn(i) for i in [0, n). The parallel branch requires fn not to throw
/// and to write only to slot i of its outputs.
template <typename Fn>
void for_each_index(long n, Exec exec, Fn&& fn) {
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) fn(i);
  } else {
    for (long i = 0; i < n; ++i) fn(i);
  }
}

}  // namespace qkt
