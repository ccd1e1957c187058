#include <atomic>
#include <cstdlib>
#include <string_view>

#include "mkzfrac/simd/kernels.hpp"

namespace mkzfrac::simd {

#if defined(MKZFRAC_HAVE_AVX2)
const KernelTable* avx2_kernel_table() noexcept;
#endif

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "unknown";
}

const KernelTable* avx2_kernels() noexcept {
#if defined(MKZFRAC_HAVE_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? avx2_kernel_table() : nullptr;
#else
    return nullptr;
#endif
}

namespace {

const KernelTable* initial_selection() noexcept {
    const char* env = std::getenv("MKZFRAC_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return &scalar_kernels();
    if (const KernelTable* t = avx2_kernels()) return t;
    return &scalar_kernels();
}

std::atomic<const KernelTable*>& slot() noexcept {
    static std::atomic<const KernelTable*> current{initial_selection()};
    return current;
}

}  // namespace

const KernelTable& active() noexcept { return *slot().load(std::memory_order_acquire); }

void select(Isa isa) noexcept {
    const KernelTable* t = &scalar_kernels();
    if (isa == Isa::avx2) {
        if (const KernelTable* a = avx2_kernels()) t = a;
    }
    slot().store(t, std::memory_order_release);
}

}  // namespace mkzfrac::simd
