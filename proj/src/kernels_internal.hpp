#pragma once

#include "ratbounds/kernels.hpp"

namespace ratbounds::kernels::detail {

extern const Table kScalarTable;
#if defined(RATBOUNDS_HAVE_AVX2)
extern const Table kAvx2Table;
#endif

}  // namespace ratbounds::kernels::detail
