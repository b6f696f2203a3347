#pragma once

// Include this instead of <omp.h> so the kernels still build without OpenMP.
#if defined(_OPENMP)
#include <omp.h>
namespace qng {
constexpr bool kUseOpenMP = true;
}  // namespace qng
#else
namespace qng {
constexpr bool kUseOpenMP = false;
}  // namespace qng
inline int omp_get_thread_num() { return 0; }
inline int omp_get_max_threads() { return 1; }
#endif

namespace qng {

/// Worker count for the parallel kernels. QNG_THREADS caps it when set to a
/// positive integer; otherwise every available core is used.
int thread_count();

}  // namespace qng
