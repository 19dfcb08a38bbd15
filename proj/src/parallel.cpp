#include "canham/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <vector>

#ifdef CANHAM_HAVE_OPENMP
#include <omp.h>
#endif

namespace canham {

int max_threads() {
    int n = 1;
#ifdef CANHAM_HAVE_OPENMP
    n = omp_get_max_threads();
#endif
    if (const char* env = std::getenv("CANHAM_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return n;
}

void for_each_index(int n, Exec mode, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    if (mode == Exec::Serial || max_threads() == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(static_cast<size_t>(n));
#ifdef CANHAM_HAVE_OPENMP
#pragma omp parallel for schedule(static) num_threads(max_threads())
#endif
    for (int i = 0; i < n; ++i) {
        try {
            fn(i);
        } catch (...) {
            errors[static_cast<size_t>(i)] = std::current_exception();
        }
    }
    for (int i = 0; i < n; ++i)
        if (errors[static_cast<size_t>(i)]) std::rethrow_exception(errors[static_cast<size_t>(i)]);
}

} // namespace canham
