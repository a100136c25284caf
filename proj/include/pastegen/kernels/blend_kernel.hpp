#pragma once

#include <cstdint>

namespace pastegen::kernels {

// Alpha-over for one span of interleaved RGBA pixels:
//   dst[c] = (a*src[c] + (255-a)*dst[c] + 127) / 255      (integer, exact)
// Applied to all four channels; a fully opaque or transparent source leaves
// dst bytes exactly copied/untouched.
void blend_over_scalar(uint8_t* dst, const uint8_t* src, int count);

// Chroma-key coverage over interleaved RGBA pixels: writes the alpha byte of
// each pixel to 0 where max(|r-kr|,|g-kg|,|b-kb|) <= tolerance, else 255.
void key_mask_scalar(uint8_t* rgba, int count, uint8_t key_r, uint8_t key_g, uint8_t key_b,
                     int tolerance);

#if defined(__x86_64__) || defined(__i386__)
void blend_over_avx2(uint8_t* dst, const uint8_t* src, int count);
void key_mask_avx2(uint8_t* rgba, int count, uint8_t key_r, uint8_t key_g, uint8_t key_b,
                   int tolerance);
#endif

// Dispatching wrappers.
void blend_over(uint8_t* dst, const uint8_t* src, int count);
void key_mask(uint8_t* rgba, int count, uint8_t key_r, uint8_t key_g, uint8_t key_b,
              int tolerance);

} // namespace pastegen::kernels
