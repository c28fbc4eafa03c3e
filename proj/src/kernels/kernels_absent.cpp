// Null entries for SIMD variants that are not part of this build.

#include "idlab/kernels.hpp"

namespace idlab::kernels::detail {

#ifndef IDLAB_HAVE_AVX2
const KernelTable* avx2_table() { return nullptr; }
#endif

#ifndef IDLAB_HAVE_NEON
const KernelTable* neon_table() { return nullptr; }
#endif

} // namespace idlab::kernels::detail
