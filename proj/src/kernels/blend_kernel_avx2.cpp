#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include "pastegen/kernels/blend_kernel.hpp"

namespace pastegen::kernels {

namespace {

// Exact (x + 127) / 255 over 16-bit lanes holding x <= 255*255:
// equal to round-half-up(x/255) = ((x+128) + ((x+128)>>8)) >> 8.
inline __m256i div255_round(__m256i x) {
    const __m256i v = _mm256_add_epi16(x, _mm256_set1_epi16(128));
    return _mm256_srli_epi16(_mm256_add_epi16(v, _mm256_srli_epi16(v, 8)), 8);
}

// Broadcast each pixel's alpha across its four 16-bit channel lanes.
inline __m256i splat_alpha16(__m256i px16) {
    const __m256i mask = _mm256_setr_epi8(6, 7, 6, 7, 6, 7, 6, 7, 14, 15, 14, 15, 14, 15, 14, 15,
                                          6, 7, 6, 7, 6, 7, 6, 7, 14, 15, 14, 15, 14, 15, 14, 15);
    return _mm256_shuffle_epi8(px16, mask);
}

inline __m256i blend16(__m256i s16, __m256i d16) {
    const __m256i a = splat_alpha16(s16);
    const __m256i ia = _mm256_sub_epi16(_mm256_set1_epi16(255), a);
    const __m256i t =
        _mm256_add_epi16(_mm256_mullo_epi16(a, s16), _mm256_mullo_epi16(ia, d16));
    return div255_round(t);
}

} // namespace

void blend_over_avx2(uint8_t* dst, const uint8_t* src, int count) {
    int i = 0;
    for (; i + 8 <= count; i += 8) {
        const __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i * 4));
        const __m256i d = _mm256_loadu_si256(reinterpret_cast<__m256i*>(dst + i * 4));

        const __m256i s_lo = _mm256_cvtepu8_epi16(_mm256_castsi256_si128(s));
        const __m256i s_hi = _mm256_cvtepu8_epi16(_mm256_extracti128_si256(s, 1));
        const __m256i d_lo = _mm256_cvtepu8_epi16(_mm256_castsi256_si128(d));
        const __m256i d_hi = _mm256_cvtepu8_epi16(_mm256_extracti128_si256(d, 1));

        const __m256i o_lo = blend16(s_lo, d_lo);
        const __m256i o_hi = blend16(s_hi, d_hi);

        __m256i packed = _mm256_packus_epi16(o_lo, o_hi);
        packed = _mm256_permute4x64_epi64(packed, 0xD8);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i * 4), packed);
    }
    if (i < count) blend_over_scalar(dst + i * 4, src + i * 4, count - i);
}

void key_mask_avx2(uint8_t* rgba, int count, uint8_t key_r, uint8_t key_g, uint8_t key_b,
                   int tolerance) {
    const int key_word = key_r | (key_g << 8) | (key_b << 16);
    const __m256i key = _mm256_set1_epi32(key_word);
    const __m256i rgb_only = _mm256_set1_epi32(0x00FFFFFF);
    const __m256i alpha_pos = _mm256_set1_epi32(static_cast<int>(0xFF000000u));
    const __m256i tol = _mm256_set1_epi8(static_cast<char>(tolerance > 255 ? 255 : tolerance));
    const __m256i zero = _mm256_setzero_si256();
    const __m256i ones = _mm256_set1_epi8(static_cast<char>(0xFF));
    const __m256i bcast0 = _mm256_setr_epi8(0, 0, 0, 0, 4, 4, 4, 4, 8, 8, 8, 8, 12, 12, 12, 12,
                                            0, 0, 0, 0, 4, 4, 4, 4, 8, 8, 8, 8, 12, 12, 12, 12);

    int i = 0;
    for (; i + 8 <= count; i += 8) {
        const __m256i p = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(rgba + i * 4));
        __m256i diff = _mm256_or_si256(_mm256_subs_epu8(p, key), _mm256_subs_epu8(key, p));
        diff = _mm256_and_si256(diff, rgb_only);
        // Per-pixel max of the three channel diffs, replicated to every byte.
        __m256i m = _mm256_max_epu8(diff, _mm256_srli_epi32(diff, 8));
        m = _mm256_max_epu8(m, _mm256_srli_epi32(m, 16));
        m = _mm256_shuffle_epi8(m, bcast0);

        const __m256i le_tol = _mm256_cmpeq_epi8(_mm256_subs_epu8(m, tol), zero);
        const __m256i alpha = _mm256_andnot_si256(le_tol, ones);
        const __m256i out = _mm256_blendv_epi8(p, alpha, alpha_pos);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(rgba + i * 4), out);
    }
    if (i < count)
        key_mask_scalar(rgba + i * 4, count - i, key_r, key_g, key_b, tolerance);
}

} // namespace pastegen::kernels

#endif
