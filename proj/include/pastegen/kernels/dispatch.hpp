#pragma once

namespace pastegen::kernels {

// Instruction sets the inner-loop kernels are compiled for. Every kernel has
// a scalar reference; vector variants are required to produce bit-identical
// results (they vectorize across pixels and keep each pixel's operation
// sequence, so IEEE semantics match lane for lane).
enum class Isa {
    scalar,
    avx2,
};

const char* isa_name(Isa isa);

// CPUID probe, honoring the PASTEGEN_ISA environment variable ("scalar" or
// "avx2") as an override. Unknown or unsupported requests fall back to the
// best supported set.
Isa detect_isa();

// Process-wide selection used by the dispatching wrappers. Initialized from
// detect_isa() on first use; tests pin it explicitly.
Isa active_isa();
void set_active_isa(Isa isa);

bool cpu_supports(Isa isa);

} // namespace pastegen::kernels
