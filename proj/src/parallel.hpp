#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rebus {

// Thread count for an OpenMP region: a positive request is taken as is,
// anything else means the runtime default.
inline int resolve_threads(int requested) {
#ifdef _OPENMP
  return requested > 0 ? requested : omp_get_max_threads();
#else
  (void)requested;
  return 1;
#endif
}

}  // namespace rebus
