#pragma once

#include "vchain/kernels/theta_series.hpp"

namespace vchain::kernels {

enum class Backend { scalar, avx2 };

struct KernelSet {
    PairSumsFn pair_sums;
    PsiSumFn psi_sum;
    TimeAvgSumFn timeavg_sum;
    const char* name;
};

/// True when the AVX2 variants are compiled in and the CPU supports them.
bool avx2_available();

const KernelSet& kernel_set(Backend b);

/// Active backend: best available by default, overridable via the
/// VCHAIN_SIMD environment variable ("scalar" or "avx2") or at runtime.
Backend active_backend();
void set_active_backend(Backend b);
const KernelSet& active_kernels();

}  // namespace vchain::kernels
