#pragma once

#include "mscs/kernels.hpp"

namespace mscs::kernels::detail {

const KernelTable& scalar_table();
#if defined(MSCS_HAVE_AVX2_TU)
const KernelTable& avx2_table();
#endif
#if defined(MSCS_HAVE_NEON_TU)
const KernelTable& neon_table();
#endif

}  // namespace mscs::kernels::detail
