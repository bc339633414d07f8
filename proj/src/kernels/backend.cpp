#include "vchain/kernels/backend.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace vchain::kernels {

namespace {

const KernelSet kScalarSet{theta_pair_sums_scalar, theta_psi_sum_scalar,
                           theta_timeavg_sum_scalar, "scalar"};

#ifndef VCHAIN_NO_AVX2
const KernelSet kAvx2Set{theta_pair_sums_avx2, theta_psi_sum_avx2,
                         theta_timeavg_sum_avx2, "avx2"};
#endif

Backend detect_default() {
    if (const char* env = std::getenv("VCHAIN_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && avx2_available()) return Backend::avx2;
    }
    return avx2_available() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& active_slot() {
    static std::atomic<Backend> slot{detect_default()};
    return slot;
}

}  // namespace

bool avx2_available() {
#ifdef VCHAIN_NO_AVX2
    return false;
#else
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok;
#endif
}

const KernelSet& kernel_set(Backend b) {
#ifndef VCHAIN_NO_AVX2
    if (b == Backend::avx2) {
        if (!avx2_available()) throw std::runtime_error("AVX2 kernels unavailable on this CPU");
        return kAvx2Set;
    }
#else
    if (b == Backend::avx2) throw std::runtime_error("AVX2 kernels not compiled in");
#endif
    return kScalarSet;
}

Backend active_backend() { return active_slot().load(std::memory_order_relaxed); }

void set_active_backend(Backend b) {
    (void)kernel_set(b);  // validates availability
    active_slot().store(b, std::memory_order_relaxed);
}

const KernelSet& active_kernels() { return kernel_set(active_backend()); }

}  // namespace vchain::kernels
