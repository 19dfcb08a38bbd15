#pragma once

#include <functional>

namespace canham {

// Execution policy for the embarrassingly parallel scans (t-grids, z-lists,
// r-quadrature nodes). Every worker writes to its own index slot, so Serial
// and Parallel produce bit-identical results; Serial is kept as the
// reference path for testing and benchmarking.
enum class Exec { Serial, Parallel };

// Number of worker threads the Parallel policy will use. Honors the
// CANHAM_THREADS environment variable as an upper cap.
int max_threads();

// Runs fn(i) for i = 0..n-1 under the given policy. Exceptions thrown by
// workers are collected and the one with the smallest index is rethrown
// after the loop, so failure behavior does not depend on scheduling.
void for_each_index(int n, Exec mode, const std::function<void(int)>& fn);

} // namespace canham
