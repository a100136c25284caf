#include "pastegen/kernels/dispatch.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace pastegen::kernels {

const char* isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "?";
}

bool cpu_supports(Isa isa) {
    if (isa == Isa::scalar) return true;
#if defined(__x86_64__) || defined(__i386__)
    if (isa == Isa::avx2) return __builtin_cpu_supports("avx2") != 0;
#endif
    return false;
}

Isa detect_isa() {
    if (const char* env = std::getenv("PASTEGEN_ISA")) {
        if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
        if (std::strcmp(env, "avx2") == 0 && cpu_supports(Isa::avx2)) return Isa::avx2;
    }
    return cpu_supports(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

namespace {
std::atomic<int> g_active{-1};
}

Isa active_isa() {
    int v = g_active.load(std::memory_order_relaxed);
    if (v < 0) {
        v = static_cast<int>(detect_isa());
        g_active.store(v, std::memory_order_relaxed);
    }
    return static_cast<Isa>(v);
}

void set_active_isa(Isa isa) {
    g_active.store(static_cast<int>(isa), std::memory_order_relaxed);
}

} // namespace pastegen::kernels
