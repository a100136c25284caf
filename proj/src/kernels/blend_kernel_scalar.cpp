#include "pastegen/kernels/blend_kernel.hpp"

#include "pastegen/kernels/dispatch.hpp"

namespace pastegen::kernels {

void blend_over_scalar(uint8_t* dst, const uint8_t* src, int count) {
    for (int i = 0; i < count; ++i) {
        const int a = src[i * 4 + 3];
        const int ia = 255 - a;
        for (int c = 0; c < 4; ++c) {
            const int s = src[i * 4 + c];
            const int d = dst[i * 4 + c];
            dst[i * 4 + c] = static_cast<uint8_t>((a * s + ia * d + 127) / 255);
        }
    }
}

void key_mask_scalar(uint8_t* rgba, int count, uint8_t key_r, uint8_t key_g, uint8_t key_b,
                     int tolerance) {
    const int kr = key_r, kg = key_g, kb = key_b;
    for (int i = 0; i < count; ++i) {
        const int dr = rgba[i * 4 + 0] - kr;
        const int dg = rgba[i * 4 + 1] - kg;
        const int db = rgba[i * 4 + 2] - kb;
        int m = dr < 0 ? -dr : dr;
        const int ag = dg < 0 ? -dg : dg;
        const int ab = db < 0 ? -db : db;
        if (ag > m) m = ag;
        if (ab > m) m = ab;
        rgba[i * 4 + 3] = m <= tolerance ? 0 : 255;
    }
}

void blend_over(uint8_t* dst, const uint8_t* src, int count) {
#if defined(__x86_64__) || defined(__i386__)
    if (active_isa() == Isa::avx2) {
        blend_over_avx2(dst, src, count);
        return;
    }
#endif
    blend_over_scalar(dst, src, count);
}

void key_mask(uint8_t* rgba, int count, uint8_t key_r, uint8_t key_g, uint8_t key_b,
              int tolerance) {
#if defined(__x86_64__) || defined(__i386__)
    if (active_isa() == Isa::avx2) {
        key_mask_avx2(rgba, count, key_r, key_g, key_b, tolerance);
        return;
    }
#endif
    key_mask_scalar(rgba, count, key_r, key_g, key_b, tolerance);
}

} // namespace pastegen::kernels
